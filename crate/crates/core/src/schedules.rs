//! Reset-probability sequences `r_n` and the no-reset survival probability.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// How likely a reset is, as a function of the number `n` of gates applied
/// since the previous reset.
#[derive(Clone, Debug, PartialEq)]
pub enum ResetSchedule {
    /// `r_n = rate`.
    Poisson { rate: f64 },
    /// `r_n = 1` iff `n == period`, else 0.
    Deterministic { period: usize },
    /// `r_n = gamma / (n + 1)^alpha`.
    PowerLaw { gamma: f64, alpha: f64 },
    /// `r_n` read from a finite table.
    Explicit(Vec<f64>),
}

fn check_prob(name: &str, p: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(Error::InvalidSchedule(format!("{name} = {p} outside [0, 1]")))
    }
}

impl ResetSchedule {
    pub fn poisson(rate: f64) -> Result<Self> {
        Ok(Self::Poisson {
            rate: check_prob("r", rate)?,
        })
    }

    pub fn deterministic(period: usize) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidSchedule("deterministic l must be >= 1".into()));
        }
        Ok(Self::Deterministic { period })
    }

    pub fn power_law(gamma: f64, alpha: f64) -> Result<Self> {
        let gamma = check_prob("gamma", gamma)?;
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidSchedule(format!("alpha = {alpha} must be > 0")));
        }
        Ok(Self::PowerLaw { gamma, alpha })
    }

    pub fn explicit(rates: Vec<f64>) -> Result<Self> {
        for (n, &r) in rates.iter().enumerate() {
            check_prob(&format!("r_{n}"), r)?;
        }
        Ok(Self::Explicit(rates))
    }

    /// `r_n`.
    pub fn prob_at(&self, n: usize) -> Result<f64> {
        Ok(match self {
            Self::Poisson { rate } => *rate,
            Self::Deterministic { period } => {
                if n == *period {
                    1.0
                } else {
                    0.0
                }
            }
            Self::PowerLaw { gamma, alpha } => gamma / ((n + 1) as f64).powf(*alpha),
            Self::Explicit(rates) => *rates.get(n).ok_or(Error::OutOfRange {
                index: n,
                len: rates.len(),
            })?,
        })
    }

    /// `log P_t(t) = sum_{j<t} log(1 - r_j)`; `-inf` once some `r_j = 1`.
    pub fn log_no_reset_prob(&self, t: usize) -> Result<f64> {
        if let Self::Poisson { rate } = self {
            // closed form, avoids an O(t) loop
            return Ok(if *rate >= 1.0 && t > 0 {
                f64::NEG_INFINITY
            } else {
                t as f64 * (-rate).ln_1p()
            });
        }
        let mut acc = 0.0;
        for j in 0..t {
            let r = self.prob_at(j)?;
            if r >= 1.0 {
                return Ok(f64::NEG_INFINITY);
            }
            acc += (-r).ln_1p();
        }
        Ok(acc)
    }

    /// Probability `P_t(t) = prod_{j<t} (1 - r_j)` that no reset happened in
    /// the first `t` steps, accumulated in log space.
    pub fn no_reset_prob(&self, t: usize) -> Result<f64> {
        Ok(self.log_no_reset_prob(t)?.exp())
    }

    /// Large-`t` closed form of `log P_t(t)` for a power-law schedule:
    ///
    /// * `alpha > 1`: `-gamma zeta(alpha)`
    /// * `alpha = 1`: `-gamma (gamma_E + ln t)`
    /// * `alpha < 1`: `-gamma t^{1-alpha} / (1 - alpha)`
    ///
    /// These keep only the first order of `log(1 - r) = -r - r^2/2 - ...`.
    pub fn log_no_reset_asymptote(&self, t: usize) -> Result<f64> {
        let Self::PowerLaw { gamma, alpha } = *self else {
            return Err(Error::InvalidSchedule(
                "survival asymptotics are defined for power-law schedules only".into(),
            ));
        };
        let t = t as f64;
        Ok(if (alpha - 1.0).abs() < 1e-12 {
            -gamma * (EULER_GAMMA + t.ln())
        } else if alpha > 1.0 {
            -gamma * zeta(alpha)
        } else {
            -gamma * t.powf(1.0 - alpha) / (1.0 - alpha)
        })
    }

    pub fn no_reset_asymptote(&self, t: usize) -> Result<f64> {
        Ok(self.log_no_reset_asymptote(t)?.exp())
    }
}

impl fmt::Display for ResetSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Poisson { rate } => write!(f, "poisson:r={rate}"),
            Self::Deterministic { period } => write!(f, "deterministic:l={period}"),
            Self::PowerLaw { gamma, alpha } => write!(f, "powerlaw:gamma={gamma},alpha={alpha}"),
            Self::Explicit(rates) => {
                let items: Vec<String> = rates.iter().map(|r| r.to_string()).collect();
                write!(f, "explicit:[{}]", items.join(","))
            }
        }
    }
}

/// Parses `poisson:r=0.3`, `powerlaw:gamma=0.2,alpha=2`, `deterministic:l=5`
/// and `explicit:[0.1,0.2]`.
impl FromStr for ResetSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidSchedule(format!("{msg} in {s:?}"));
        let (kind, body) = s.trim().split_once(':').ok_or_else(|| bad("missing ':'"))?;
        let kind = kind.trim().to_ascii_lowercase();

        if kind == "explicit" {
            let inner = body
                .trim()
                .strip_prefix('[')
                .and_then(|b| b.strip_suffix(']'))
                .ok_or_else(|| bad("explicit rates must be a [..] list"))?;
            let rates = inner
                .split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(|x| x.parse::<f64>().map_err(|_| bad(&format!("bad number {x:?}"))))
                .collect::<Result<Vec<_>>>()?;
            return Self::explicit(rates);
        }

        let mut fields = std::collections::BTreeMap::new();
        for kv in body.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            fields.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
        }
        let mut take = |key: &str| -> Result<String> {
            fields.remove(key).ok_or_else(|| bad(&format!("missing `{key}`")))
        };
        let num = |v: String| v.parse::<f64>().map_err(|_| bad(&format!("bad number {v:?}")));

        let schedule = match kind.as_str() {
            "poisson" => Self::poisson(num(take("r")?)?)?,
            "powerlaw" => {
                let gamma = num(take("gamma")?)?;
                let alpha = num(take("alpha")?)?;
                Self::power_law(gamma, alpha)?
            }
            "deterministic" => {
                let l = take("l")?;
                Self::deterministic(l.parse().map_err(|_| bad(&format!("bad period {l:?}")))?)?
            }
            other => return Err(bad(&format!("unknown schedule kind `{other}`"))),
        };
        if let Some(extra) = fields.keys().next() {
            return Err(bad(&format!("unexpected field `{extra}`")));
        }
        Ok(schedule)
    }
}

/// Riemann zeta for real `s > 1`, by direct summation plus an
/// Euler–Maclaurin tail.
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta(s) needs s > 1");
    const N: usize = 16;
    // B_{2k} / (2k)!
    const COEFFS: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
    ];
    let nf = N as f64;
    let mut sum: f64 = (1..N).map(|n| (n as f64).powf(-s)).sum();
    sum += nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s);
    // rising factorial s (s+1) ... (s+2k-2)
    let mut rising = s;
    let mut power = nf.powf(-s - 1.0);
    for (k, c) in COEFFS.iter().enumerate() {
        sum += c * rising * power;
        let m = 2.0 * k as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        power /= nf * nf;
    }
    sum
}
