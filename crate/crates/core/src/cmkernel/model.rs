use std::fmt;

use super::disc::{make_disc_euler, make_disc_qgsw, DiscPerturbation};
use super::kernel::{make_euler, make_euler_alpha, make_gsqg, make_qgsw, RadialKernel};
use crate::error::{Error, Result};

/// The seven catalog models with their parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Euler,
    Gsqg { beta: f64 },
    Qgsw { eps: f64 },
    EulerAlpha { alpha: f64 },
    EulerDisc,
    GsqgDisc { beta: f64 },
    QgswDisc { eps: f64 },
}

pub const MODEL_IDS: [&str; 7] = [
    "euler",
    "gsqg",
    "qgsw",
    "euler-alpha",
    "euler-disc",
    "gsqg-disc",
    "qgsw-disc",
];

/// Parameter names accepted by a model id.
pub fn model_param_names(id: &str) -> Result<&'static [&'static str]> {
    Ok(match id {
        "euler" | "euler-disc" => &[],
        "gsqg" | "gsqg-disc" => &["beta"],
        "qgsw" | "qgsw-disc" => &["eps"],
        "euler-alpha" => &["alpha"],
        _ => {
            return Err(Error::param(format!(
                "unknown model '{id}'; valid models: {}",
                MODEL_IDS.join(", ")
            )))
        }
    })
}

impl Model {
    /// Build a model from its id and `key=value` parameters.
    pub fn from_id(id: &str, params: &[(String, f64)]) -> Result<Model> {
        let names = model_param_names(id)?;
        for (k, _) in params {
            if !names.contains(&k.as_str()) {
                let valid = if names.is_empty() {
                    "none".to_string()
                } else {
                    names.join(", ")
                };
                return Err(Error::param(format!(
                    "parameter '{k}' not valid for model '{id}'; valid parameters: {valid}"
                )));
            }
        }
        let get = |name: &str| -> Result<f64> {
            params
                .iter()
                .rev()
                .find(|(k, _)| k == name)
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::param(format!("model '{id}' requires --param {name}=<value>")))
        };
        let m = match id {
            "euler" => Model::Euler,
            "gsqg" => Model::Gsqg { beta: get("beta")? },
            "qgsw" => Model::Qgsw { eps: get("eps")? },
            "euler-alpha" => Model::EulerAlpha { alpha: get("alpha")? },
            "euler-disc" => Model::EulerDisc,
            "gsqg-disc" => Model::GsqgDisc { beta: get("beta")? },
            "qgsw-disc" => Model::QgswDisc { eps: get("eps")? },
            _ => unreachable!(),
        };
        m.kernel()?;
        Ok(m)
    }

    pub fn id(&self) -> &'static str {
        match self {
            Model::Euler => "euler",
            Model::Gsqg { .. } => "gsqg",
            Model::Qgsw { .. } => "qgsw",
            Model::EulerAlpha { .. } => "euler-alpha",
            Model::EulerDisc => "euler-disc",
            Model::GsqgDisc { .. } => "gsqg-disc",
            Model::QgswDisc { .. } => "qgsw-disc",
        }
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Model::Euler | Model::EulerDisc => vec![],
            Model::Gsqg { beta } | Model::GsqgDisc { beta } => vec![("beta", beta)],
            Model::Qgsw { eps } | Model::QgswDisc { eps } => vec![("eps", eps)],
            Model::EulerAlpha { alpha } => vec![("alpha", alpha)],
        }
    }

    pub fn is_disc(&self) -> bool {
        matches!(self, Model::EulerDisc | Model::GsqgDisc { .. } | Model::QgswDisc { .. })
    }

    /// The radial part K0 (the whole kernel for plane models).
    pub fn kernel(&self) -> Result<RadialKernel> {
        match *self {
            Model::Euler | Model::EulerDisc => Ok(make_euler()),
            Model::Gsqg { beta } | Model::GsqgDisc { beta } => make_gsqg(beta),
            Model::Qgsw { eps } | Model::QgswDisc { eps } => make_qgsw(eps),
            Model::EulerAlpha { alpha } => make_euler_alpha(alpha),
        }
    }

    /// K1 for disc models with a pointwise evaluator. gsqg-disc has none
    /// and plane models have no perturbation.
    pub fn disc_perturbation(&self, terms: (usize, usize)) -> Result<Option<DiscPerturbation>> {
        match *self {
            Model::EulerDisc => Ok(Some(make_disc_euler())),
            Model::QgswDisc { eps } => Ok(Some(make_disc_qgsw(eps, terms)?)),
            Model::GsqgDisc { .. } => Err(Error::UnsupportedMethod(
                "gsqg-disc perturbation is only available through its spectral series".into(),
            )),
            _ => Ok(None),
        }
    }

    /// Check the patch radius: b in (0,1) for disc models, b > 0 otherwise.
    pub fn check_radius(&self, b: f64) -> Result<()> {
        let ok = if self.is_disc() {
            b > 0.0 && b < 1.0
        } else {
            b > 0.0 && b.is_finite()
        };
        if ok {
            Ok(())
        } else if self.is_disc() {
            Err(Error::domain(format!("disc model needs b in (0,1), got {b}")))
        } else {
            Err(Error::domain(format!("b must be positive, got {b}")))
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())?;
        for (k, v) in self.params() {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_validate() {
        let p = |k: &str, v: f64| vec![(k.to_string(), v)];
        assert_eq!(Model::from_id("euler", &[]).unwrap(), Model::Euler);
        assert_eq!(
            Model::from_id("gsqg", &p("beta", 0.5)).unwrap(),
            Model::Gsqg { beta: 0.5 }
        );
        let e = Model::from_id("qgsw", &p("gamma", 1.0)).unwrap_err();
        assert!(e.to_string().contains("eps"), "{e}");
        assert!(e.is_validation());
        assert!(Model::from_id("gsqg", &[]).is_err());
        assert!(Model::from_id("gsqg", &p("beta", 1.5)).is_err());
        assert!(Model::from_id("navier", &[]).is_err());
        assert!(Model::EulerDisc.check_radius(1.0).is_err());
        assert!(Model::Euler.check_radius(1.0).is_ok());
    }
}
