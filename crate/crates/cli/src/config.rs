//! Flag parsing and validation into a resolved configuration.

use std::fmt;

use dmf_core::{Error, FieldDesc, PolyA};

/// A failure before any computation starts: bad flag values or combinations.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Inclusive weight range `A..B` with an optional step `A..B:S`, or a single
/// weight `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightRange {
    pub start: u64,
    pub end: u64,
    pub step: u64,
}

impl WeightRange {
    pub fn weights(&self) -> Vec<u64> {
        if self.start > self.end {
            return Vec::new();
        }
        (self.start..=self.end).step_by(self.step as usize).collect()
    }
}

impl std::str::FromStr for WeightRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("invalid weight range '{s}': expected K, A..B or A..B:STEP");
        let s = s.trim();
        let (body, step) = match s.split_once(':') {
            Some((b, st)) => (b, st.trim().parse::<u64>().map_err(|_| bad())?),
            None => (s, 1),
        };
        if step == 0 {
            return Err(format!("invalid weight range '{s}': step must be positive"));
        }
        let (start, end) = match body.split_once("..") {
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
            }
            None => {
                let k = body.parse().map_err(|_| bad())?;
                (k, k)
            }
        };
        Ok(WeightRange { start, end, step })
    }
}

/// The field flags `--q`, `--p`, `--r`, `--modulus` as given.
#[derive(Clone, Debug, Default)]
pub struct FieldSpec {
    pub q: Vec<u64>,
    pub p: Option<u32>,
    pub r: Option<u32>,
    pub modulus: Option<String>,
}

fn parse_modulus(p: u32, text: &str) -> Result<Vec<u32>, UsageError> {
    let fp = FieldDesc::new(p, 1, None)?;
    let poly = PolyA::parse(&fp, &text.replace('x', "T"))
        .map_err(|e| UsageError(format!("invalid --modulus '{text}': {e}")))?;
    Ok(poly.coeffs().to_vec())
}

impl FieldSpec {
    fn build(&self, q: Option<u64>) -> Result<FieldDesc, UsageError> {
        let (p, r) = match (q, self.p) {
            (Some(q), p_flag) => {
                let (p, r) = dmf_core::gf::prime_power(q)
                    .ok_or_else(|| UsageError(format!("--q {q} is not a prime power")))?;
                if p_flag.is_some_and(|x| x != p) || self.r.is_some_and(|x| x != r) {
                    return Err(UsageError(format!("--q {q} disagrees with --p/--r")));
                }
                (p, r)
            }
            (None, Some(p)) => (p, self.r.unwrap_or(1)),
            (None, None) => return Err(UsageError("the field is required: pass --q or --p [--r]".into())),
        };
        let modulus = self.modulus.as_deref().map(|m| parse_modulus(p, m)).transpose()?;
        Ok(FieldDesc::new(p, r, modulus.as_deref())?)
    }

    /// The single field of a query; several `--q` values are rejected.
    pub fn field(&self) -> Result<FieldDesc, UsageError> {
        match self.q.as_slice() {
            [] => self.build(None),
            [q] => self.build(Some(*q)),
            _ => Err(UsageError("this command takes a single --q".into())),
        }
    }

    /// Every field listed in `--q`, in order.
    pub fn fields(&self) -> Result<Vec<FieldDesc>, UsageError> {
        if self.q.is_empty() {
            return Ok(vec![self.build(None)?]);
        }
        if self.q.len() > 1 && self.modulus.is_some() {
            return Err(UsageError("--modulus needs a single --q".into()));
        }
        self.q.iter().map(|&q| self.build(Some(q))).collect()
    }
}

/// Parses a monic irreducible prime over the given field.
pub fn parse_prime(field: &FieldDesc, text: &str) -> Result<PolyA, UsageError> {
    let wp = PolyA::parse(field, text).map_err(|e| UsageError(format!("invalid --prime '{text}': {e}")))?;
    if !wp.is_monic() {
        return Err(UsageError(format!("--prime {wp} is not monic")));
    }
    if !wp.is_irreducible() {
        return Err(UsageError(format!("--prime {wp} is not irreducible over F_{}", field.size())));
    }
    Ok(wp)
}

/// Splits a comma-separated list, keeping empty input as no items.
pub fn split_list(text: &str) -> Vec<String> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_range_forms() {
        assert_eq!("4..62:2".parse::<WeightRange>().unwrap().weights().len(), 30);
        assert_eq!("12".parse::<WeightRange>().unwrap().weights(), vec![12]);
        assert_eq!("5..=7".parse::<WeightRange>().unwrap().weights(), vec![5, 6, 7]);
        assert!("9..3".parse::<WeightRange>().unwrap().weights().is_empty());
        assert!("1..4:0".parse::<WeightRange>().is_err());
        assert!("a..b".parse::<WeightRange>().is_err());
    }

    #[test]
    fn field_resolution() {
        let spec = FieldSpec { q: vec![9], ..Default::default() };
        assert_eq!(spec.field().unwrap().modulus_string(), "x^2+1");
        let spec = FieldSpec { p: Some(3), r: Some(2), modulus: Some("x^2+2x+2".into()), ..Default::default() };
        assert_eq!(spec.field().unwrap().size(), 9);
        let spec = FieldSpec { q: vec![6], ..Default::default() };
        assert!(spec.field().is_err());
        let spec = FieldSpec { q: vec![9], p: Some(2), ..Default::default() };
        assert!(spec.field().is_err());
        let spec = FieldSpec { p: Some(3), r: Some(2), modulus: Some("x^2+1+x^2".into()), ..Default::default() };
        assert!(spec.field().is_err());
    }

    #[test]
    fn prime_validation() {
        let f = FieldDesc::from_order(3).unwrap();
        assert!(parse_prime(&f, "T^2+1").is_ok());
        assert!(parse_prime(&f, "T^2+2").is_err());
        assert!(parse_prime(&f, "2T+1").is_err());
    }
}
