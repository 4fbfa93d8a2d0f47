//! Parameter sets for the Koornwinder family.
//!
//! Everything is kept exactly rational by parametrizing with square roots:
//! `q = sigma^2`, `t = tau^2`, `t_r = tau_r^2`. Coefficient formulas only ever
//! need `sigma`, `tau`, the four `t_r`, and the single product
//! `sqrt(t0 t1 t2 t3)`, so individual `tau_r` are not stored. That choice is
//! what makes the dual parameter set exactly representable: its `t_r` are
//! rational products of the primal `tau_r`, and the square roots it needs are
//! again perfect squares.

use crate::scalar::{fnv1a64, format_rat, parse_rat, rat_pow, rat_sqrt, Rat};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

/// JSON-facing configuration: rank plus square-root parameters as `"p/q"` strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawConfig {
    pub n: usize,
    pub sigma: String,
    pub tau: String,
    pub tau0: String,
    pub tau1: String,
    pub tau2: String,
    pub tau3: String,
}

/// Errors from parameter construction.
#[derive(Debug, thiserror::Error)]
pub enum ParamError {
    #[error("invalid parameters: {}", problems.join("; "))]
    Invalid { problems: Vec<String> },
    #[error("dual parameter {name} = {value} is not the square of a rational")]
    DualNotSquare { name: String, value: String },
    #[error("config: {0}")]
    Config(String),
}

/// Validated parameter set with every derived quantity the operators need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterSet {
    /// Number of variables.
    pub n: usize,
    /// `sigma = q^(1/2)`, in (0, 1).
    pub sqrt_q: Rat,
    /// Base `q = sigma^2`.
    pub q: Rat,
    /// `tau = t^(1/2)`, in (0, 1].
    pub sqrt_t: Rat,
    /// Coupling `t = tau^2`.
    pub t: Rat,
    /// Askey-Wilson-type parameters `t_0..t_3`, each positive.
    pub t_r: [Rat; 4],
    /// `sqrt(t_0 t_1 t_2 t_3)`, the only square root of the `t_r` ever used.
    pub sqrt_t_prod: Rat,
    /// True when some `t_r` lies outside (0, 1], as happens for dual sets.
    /// Algebraic identities are unaffected; positivity of the orthogonality
    /// measure is not guaranteed in that regime.
    pub nonstandard_range: bool,
}

impl ParameterSet {
    /// Builds a set from square-root data, enforcing the standard ranges
    /// `sigma` in (0,1) and `tau`, `tau_r` in (0,1].
    pub fn from_sqrt_parts(
        n: usize,
        sqrt_q: Rat,
        sqrt_t: Rat,
        sqrt_t_r: [Rat; 4],
    ) -> Result<Self, ParamError> {
        let mut problems = Vec::new();
        if n == 0 {
            problems.push("n must be at least 1".to_string());
        }
        let one = Rat::one();
        if !(sqrt_q.is_positive() && sqrt_q < one) {
            problems.push(format!("sigma = {} must lie in (0,1)", format_rat(&sqrt_q)));
        }
        if !(sqrt_t.is_positive() && sqrt_t <= one) {
            problems.push(format!("tau = {} must lie in (0,1]", format_rat(&sqrt_t)));
        }
        for (r, tau_r) in sqrt_t_r.iter().enumerate() {
            if !(tau_r.is_positive() && *tau_r <= one) {
                problems.push(format!("tau{r} = {} must lie in (0,1]", format_rat(tau_r)));
            }
        }
        if !problems.is_empty() {
            return Err(ParamError::Invalid { problems });
        }
        let q = &sqrt_q * &sqrt_q;
        let t = &sqrt_t * &sqrt_t;
        let t_r = [
            &sqrt_t_r[0] * &sqrt_t_r[0],
            &sqrt_t_r[1] * &sqrt_t_r[1],
            &sqrt_t_r[2] * &sqrt_t_r[2],
            &sqrt_t_r[3] * &sqrt_t_r[3],
        ];
        let sqrt_t_prod = sqrt_t_r.iter().product();
        Ok(Self {
            n,
            sqrt_q,
            q,
            sqrt_t,
            t,
            t_r,
            sqrt_t_prod,
            nonstandard_range: false,
        })
    }

    /// Parses and validates a [`RawConfig`].
    pub fn from_config(config: &RawConfig) -> Result<Self, ParamError> {
        let parse = |name: &str, text: &str| {
            parse_rat(text).map_err(|e| ParamError::Config(format!("{name}: {e}")))
        };
        let sqrt_q = parse("sigma", &config.sigma)?;
        let sqrt_t = parse("tau", &config.tau)?;
        let sqrt_t_r = [
            parse("tau0", &config.tau0)?,
            parse("tau1", &config.tau1)?,
            parse("tau2", &config.tau2)?,
            parse("tau3", &config.tau3)?,
        ];
        Self::from_sqrt_parts(config.n, sqrt_q, sqrt_t, sqrt_t_r)
    }

    /// The dual parameter set: `q` and `t` are fixed while
    /// `t^_0 = sqrt(t0 t1 t2 t3)`, `t^_1 = sqrt(t0 t1 / (t2 t3))`,
    /// `t^_2 = sqrt(t0 t2 / (t1 t3))`, `t^_3 = sqrt(t0 t3 / (t1 t2))`.
    ///
    /// Applying it twice returns the original set. Dual values may exceed 1,
    /// which sets `nonstandard_range`.
    pub fn dual(&self) -> Result<Self, ParamError> {
        let [t0, t1, t2, t3] = &self.t_r;
        let squares = [
            ("t^0", t0 * t1 * t2 * t3),
            ("t^1", t0 * t1 / (t2 * t3)),
            ("t^2", t0 * t2 / (t1 * t3)),
            ("t^3", t0 * t3 / (t1 * t2)),
        ];
        let mut dual_t_r = Vec::with_capacity(4);
        for (name, sq) in &squares {
            let root = rat_sqrt(sq).ok_or_else(|| ParamError::DualNotSquare {
                name: (*name).to_string(),
                value: format_rat(sq),
            })?;
            dual_t_r.push(root);
        }
        let dual_t_r: [Rat; 4] = dual_t_r.try_into().expect("length 4");
        let prod: Rat = dual_t_r.iter().product();
        let sqrt_t_prod = rat_sqrt(&prod).ok_or_else(|| ParamError::DualNotSquare {
            name: "sqrt(t^0 t^1 t^2 t^3)".to_string(),
            value: format_rat(&prod),
        })?;
        let one = Rat::one();
        let nonstandard_range = dual_t_r.iter().any(|v| *v > one);
        Ok(Self {
            n: self.n,
            sqrt_q: self.sqrt_q.clone(),
            q: self.q.clone(),
            sqrt_t: self.sqrt_t.clone(),
            t: self.t.clone(),
            t_r: dual_t_r,
            sqrt_t_prod,
            nonstandard_range,
        })
    }

    /// True when the dual set has the same `t_r` (equivalently `t0 = t1 t2 t3`).
    pub fn is_self_dual(&self) -> bool {
        match self.dual() {
            Ok(d) => d.t_r == self.t_r,
            Err(_) => false,
        }
    }

    /// `q^(rho_j)` for 0-based `j`: the j-th coordinate of the base spectral
    /// point, `t^(n-1-j) * sqrt(t0 t1 t2 t3)`.
    pub fn spectral_zero(&self, j: usize) -> Rat {
        assert!(j < self.n, "index {j} out of range for n = {}", self.n);
        rat_pow(&self.t, (self.n - 1 - j) as i64) * &self.sqrt_t_prod
    }

    /// All coordinates `q^(rho_j)`, j = 0..n.
    pub fn spectral_zeros(&self) -> Vec<Rat> {
        (0..self.n).map(|j| self.spectral_zero(j)).collect()
    }

    /// Coordinates `q^(rho_j + lambda_j)` of the spectral point attached to a
    /// partition.
    pub fn spectral_point(&self, lambda: &[u64]) -> Vec<Rat> {
        assert_eq!(lambda.len(), self.n, "partition length must equal n");
        lambda
            .iter()
            .enumerate()
            .map(|(j, &l)| rat_pow(&self.q, l as i64) * self.spectral_zero(j))
            .collect()
    }

    /// Ready-made generic example: sigma = 1/2, tau = 1/2,
    /// tau_r = (1/2, 1/3, 1/4, 1/5).
    pub fn standard_example(n: usize) -> Self {
        Self::from_sqrt_parts(
            n,
            Rat::new(1.into(), 2.into()),
            Rat::new(1.into(), 2.into()),
            [
                Rat::new(1.into(), 2.into()),
                Rat::new(1.into(), 3.into()),
                Rat::new(1.into(), 4.into()),
                Rat::new(1.into(), 5.into()),
            ],
        )
        .expect("valid built-in example")
    }

    /// Ready-made self-dual example: sigma = 1/2, tau = 1/2,
    /// tau_r = (1/12, 1/2, 1/3, 1/2), so tau0 = tau1 tau2 tau3.
    pub fn self_dual_example(n: usize) -> Self {
        Self::from_sqrt_parts(
            n,
            Rat::new(1.into(), 2.into()),
            Rat::new(1.into(), 2.into()),
            [
                Rat::new(1.into(), 12.into()),
                Rat::new(1.into(), 2.into()),
                Rat::new(1.into(), 3.into()),
                Rat::new(1.into(), 2.into()),
            ],
        )
        .expect("valid built-in example")
    }

    /// Stable 64-bit fingerprint of the full parameter data.
    pub fn fingerprint(&self) -> u64 {
        let canonical = format!(
            "n={};sigma={};tau={};t0={};t1={};t2={};t3={};s={}",
            self.n,
            format_rat(&self.sqrt_q),
            format_rat(&self.sqrt_t),
            format_rat(&self.t_r[0]),
            format_rat(&self.t_r[1]),
            format_rat(&self.t_r[2]),
            format_rat(&self.t_r[3]),
            format_rat(&self.sqrt_t_prod),
        );
        fnv1a64(canonical.as_bytes())
    }
}
