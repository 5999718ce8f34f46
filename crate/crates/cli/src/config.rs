use kraus_landscape::analysis::{LevelSetConfig, OptimizerConfig};
use kraus_landscape::landscape::ZERO_EIGEN_TAU;
use kraus_landscape::qcore::{COMPLETENESS_TOL, UNITARITY_TOL};
use kraus_landscape::LandscapeParams;

use crate::args::GlobalArgs;
use crate::Failure;

/// Every numeric knob `--tol NAME=VALUE` can override.
#[derive(Debug, Clone)]
pub struct Tolerances {
    pub completeness: f64,
    pub unitarity: f64,
    pub partial_trace: f64,
    pub zero_tau: f64,
    pub optimizer: OptimizerConfig,
    pub levelset: LevelSetConfig,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            completeness: COMPLETENESS_TOL,
            unitarity: UNITARITY_TOL,
            partial_trace: 1e-10,
            zero_tau: ZERO_EIGEN_TAU,
            optimizer: OptimizerConfig::default(),
            levelset: LevelSetConfig::default(),
        }
    }
}

pub const TOLERANCE_NAMES: &[&str] = &[
    "completeness",
    "unitarity",
    "partial_trace",
    "zero_tau",
    "grad_tol",
    "max_iters",
    "initial_step",
    "armijo_shrink",
    "armijo_slope",
    "value_tol",
    "max_step",
    "guard_band",
    "max_nodes",
];

impl Tolerances {
    pub fn parse(overrides: &[String]) -> Result<Self, Failure> {
        let mut t = Self::default();
        for item in overrides {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| Failure::input(format!("--tol expects NAME=VALUE, got '{item}'")))?;
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| Failure::input(format!("--tol {name}: '{value}' is not a number")))?;
            if !(v.is_finite() && v > 0.0) {
                return Err(Failure::input(format!("--tol {name}: value must be positive and finite")));
            }
            let count = || -> Result<usize, Failure> {
                if v.fract() != 0.0 {
                    return Err(Failure::input(format!("--tol {name}: expected an integer")));
                }
                Ok(v as usize)
            };
            match name.trim() {
                "completeness" => t.completeness = v,
                "unitarity" => t.unitarity = v,
                "partial_trace" => t.partial_trace = v,
                "zero_tau" => t.zero_tau = v,
                "grad_tol" => t.optimizer.grad_tol = v,
                "max_iters" => t.optimizer.max_iters = count()?,
                "initial_step" => t.optimizer.initial_step = v,
                "armijo_shrink" => t.optimizer.armijo_shrink = v,
                "armijo_slope" => t.optimizer.armijo_slope = v,
                "value_tol" => t.levelset.value_tol = v,
                "max_step" => t.levelset.max_step = v,
                "guard_band" => t.levelset.guard_band = v,
                "max_nodes" => t.levelset.max_nodes = count()?,
                other => {
                    return Err(Failure::input(format!(
                        "unknown tolerance '{other}' (known: {})",
                        TOLERANCE_NAMES.join(", ")
                    )))
                }
            }
        }
        t.optimizer.validate()?;
        Ok(t)
    }
}

pub fn parse_floats<const N: usize>(text: &str, what: &str) -> Result<[f64; N], Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(Failure::input(format!("{what}: expected {N} comma-separated numbers, got '{text}'")));
    }
    let mut out = [0.0f64; N];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p.parse().map_err(|_| Failure::input(format!("{what}: '{p}' is not a number")))?;
        if !o.is_finite() {
            return Err(Failure::input(format!("{what}: '{p}' is not finite")));
        }
    }
    Ok(out)
}

pub fn params(global: &GlobalArgs) -> Result<LandscapeParams, Failure> {
    let text = global.w.as_deref().ok_or_else(|| Failure::input("--w a,b,g is required"))?;
    let [a, b, g] = parse_floats::<3>(text, "--w")?;
    Ok(LandscapeParams::from_components(a, b, g)?)
}

pub fn seed(global: &GlobalArgs, command: &str) -> Result<u64, Failure> {
    global.seed.ok_or_else(|| Failure::input(format!("{command} is stochastic and requires --seed")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_apply() {
        let t = Tolerances::parse(&["grad_tol=1e-6".into(), "max_iters=10".into(), "max_step=0.1".into()]).unwrap();
        assert_eq!(t.optimizer.grad_tol, 1e-6);
        assert_eq!(t.optimizer.max_iters, 10);
        assert_eq!(t.levelset.max_step, 0.1);
    }

    #[test]
    fn bad_overrides_are_input_errors() {
        for bad in ["nope=1", "grad_tol", "grad_tol=x", "max_iters=2.5", "armijo_shrink=2", "zero_tau=-1"] {
            let e = Tolerances::parse(&[bad.to_string()]).unwrap_err();
            assert_eq!(e.code, 2, "{bad}");
        }
    }

    #[test]
    fn float_lists() {
        assert_eq!(parse_floats::<3>("0.3, -0.4,0.2", "w").unwrap(), [0.3, -0.4, 0.2]);
        assert!(parse_floats::<3>("1,2", "w").is_err());
        assert!(parse_floats::<2>("1,nan", "z").is_err());
    }
}
