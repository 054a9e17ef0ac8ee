//! `lo:hi:count[:lin|log]` ranges for sweeps and grids.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub log: bool,
}

impl SweepRange {
    pub fn single(x: f64) -> Self {
        Self {
            lo: x,
            hi: x,
            count: 1,
            log: false,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let f = i as f64 / last;
                if i + 1 == self.count {
                    self.hi
                } else if self.log {
                    (self.lo.ln() + f * (self.hi.ln() - self.lo.ln())).exp()
                } else {
                    self.lo + f * (self.hi - self.lo)
                }
            })
            .collect()
    }
}

impl FromStr for SweepRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |p: &str| {
            p.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("`{p}` is not a finite number"))
        };
        let range = match parts.as_slice() {
            [x] => Self::single(num(x)?),
            [lo, hi, count] | [lo, hi, count, _] => {
                let log = match parts.get(3) {
                    None | Some(&"lin") => false,
                    Some(&"log") => true,
                    Some(other) => {
                        return Err(format!("spacing must be `lin` or `log`, got `{other}`"))
                    }
                };
                let count: usize = count
                    .parse()
                    .map_err(|_| format!("`{count}` is not a point count"))?;
                Self {
                    lo: num(lo)?,
                    hi: num(hi)?,
                    count,
                    log,
                }
            }
            _ => {
                return Err(format!(
                    "expected `value` or `lo:hi:count[:lin|log]`, got `{s}`"
                ))
            }
        };
        if range.count == 0 {
            return Err("point count must be at least 1".into());
        }
        if range.count > 1 && range.hi.partial_cmp(&range.lo) != Some(std::cmp::Ordering::Greater) {
            return Err(format!("range `{s}` must have hi > lo"));
        }
        if range.log && range.lo.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(format!(
                "log spacing needs a positive lower end, got {}",
                range.lo
            ));
        }
        Ok(range)
    }
}

impl fmt::Display for SweepRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.count == 1 {
            return write!(f, "{}", self.lo);
        }
        write!(
            f,
            "{}:{}:{}:{}",
            self.lo,
            self.hi,
            self.count,
            if self.log { "log" } else { "lin" }
        )
    }
}
