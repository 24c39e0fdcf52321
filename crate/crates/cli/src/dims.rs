use std::fmt;
use std::str::FromStr;

/// A single dimension or an inclusive range written `a..b` (or `a..=b`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimRange {
    pub start: u32,
    pub end: u32,
}

impl DimRange {
    pub fn iter(self) -> impl Iterator<Item = u32> {
        self.start..=self.end
    }
}

impl FromStr for DimRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("'{t}' is not a nonnegative integer"));
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if start > end {
            return Err(format!("empty range {s}"));
        }
        Ok(Self { start, end })
    }
}

impl fmt::Display for DimRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == self.end {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}..{}", self.start, self.end)
        }
    }
}
