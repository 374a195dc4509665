//! Parameter grids given on the command line as `lin:min:max:steps` or
//! `log:min_exp:max_exp:per_decade[,symmetric]`.

use std::fmt;
use std::str::FromStr;

use protset_core::protection::{linear_grid, symmetric_log_grid};

#[derive(Clone, Debug, PartialEq)]
pub enum TGrid {
    Linear { min: f64, max: f64, steps: usize },
    Log { min_exp: i32, max_exp: i32, per_decade: usize, symmetric: bool },
}

impl TGrid {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Self::Linear { min, max, steps } => linear_grid(min, max, steps),
            Self::Log { min_exp, max_exp, per_decade, symmetric } => {
                let all = symmetric_log_grid(min_exp, max_exp, per_decade);
                if symmetric {
                    all
                } else {
                    all.into_iter().filter(|&t| t > 0.0).collect()
                }
            }
        }
    }
}

impl fmt::Display for TGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Linear { min, max, steps } => write!(f, "lin:{min}:{max}:{steps}"),
            Self::Log { min_exp, max_exp, per_decade, symmetric } => {
                write!(f, "log:{min_exp}:{max_exp}:{per_decade}")?;
                if *symmetric {
                    write!(f, ",symmetric")?;
                }
                Ok(())
            }
        }
    }
}

const MAX_POINTS: usize = 1_000_000;

fn field<T: FromStr>(raw: &str, name: &str) -> Result<T, String> {
    raw.trim().parse().map_err(|_| format!("t-grid {name} `{raw}` is not valid"))
}

impl FromStr for TGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (body, symmetric) = match s.split_once(',') {
            None => (s, false),
            Some((body, "symmetric")) => (body, true),
            Some((_, flag)) => return Err(format!("unknown t-grid modifier `{flag}`")),
        };
        let parts: Vec<&str> = body.split(':').collect();
        match parts.as_slice() {
            ["lin", min, max, steps] => {
                if symmetric {
                    return Err("`symmetric` applies to log grids only".into());
                }
                let min: f64 = field(min, "min")?;
                let max: f64 = field(max, "max")?;
                let steps: usize = field(steps, "steps")?;
                if !(min.is_finite() && max.is_finite() && min < max) {
                    return Err(format!("t-grid needs finite min < max, got {min} and {max}"));
                }
                if !(2..=MAX_POINTS).contains(&steps) {
                    return Err(format!("t-grid steps must be in 2..={MAX_POINTS}, got {steps}"));
                }
                Ok(Self::Linear { min, max, steps })
            }
            ["log", min_exp, max_exp, per_decade] => {
                let min_exp: i32 = field(min_exp, "min_exp")?;
                let max_exp: i32 = field(max_exp, "max_exp")?;
                let per_decade: usize = field(per_decade, "per_decade")?;
                if !(-300..=300).contains(&min_exp) || !(-300..=300).contains(&max_exp) || min_exp > max_exp {
                    return Err(format!("t-grid exponents must satisfy -300 <= min_exp <= max_exp <= 300, got {min_exp} and {max_exp}"));
                }
                let points = (max_exp - min_exp) as usize * per_decade;
                if per_decade == 0 || points > MAX_POINTS {
                    return Err(format!("t-grid per_decade must be positive with at most {MAX_POINTS} points"));
                }
                Ok(Self::Log { min_exp, max_exp, per_decade, symmetric })
            }
            _ => Err(format!(
                "t-grid `{s}` must look like lin:min:max:steps or log:min_exp:max_exp:per_decade[,symmetric]"
            )),
        }
    }
}
