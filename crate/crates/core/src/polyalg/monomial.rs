use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::polyalg::{PolyError, Rational, Valuation};
use num_traits::{One, Pow};

/// Name of a polynomial variable. Cheap to clone.
pub type Var = Arc<str>;

/// A power product of variables. Factors are sorted by variable name and
/// never carry a zero exponent, so the empty product is the constant one.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            factors: Vec::new(),
        }
    }

    pub fn var(name: &str) -> Self {
        Monomial {
            factors: vec![(Arc::from(name), 1)],
        }
    }

    /// Builds a monomial from arbitrary `(name, exponent)` pairs, merging
    /// repeated names and dropping zero exponents.
    pub fn from_pairs<'a, I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, u32)>,
    {
        let mut map: BTreeMap<&str, u32> = BTreeMap::new();
        for (name, e) in pairs {
            *map.entry(name).or_insert(0) += e;
        }
        Monomial {
            factors: map
                .into_iter()
                .filter(|(_, e)| *e > 0)
                .map(|(n, e)| (Arc::from(n), e))
                .collect(),
        }
    }

    pub(crate) fn from_sorted(factors: Vec<(Var, u32)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(factors.iter().all(|(_, e)| *e > 0));
        Monomial { factors }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.factors.iter().map(|(_, e)| u64::from(*e)).sum()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn exponent(&self, name: &str) -> u32 {
        self.factors
            .iter()
            .find(|(v, _)| v.as_ref() == name)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn max_exponent(&self) -> u32 {
        self.factors.iter().map(|(_, e)| *e).max().unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.factors.iter().map(|(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, ea) = &self.factors[i];
            let (b, eb) = &other.factors[j];
            match a.cmp(b) {
                Ordering::Less => {
                    out.push((a.clone(), *ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b.clone(), *eb));
                    j += 1;
                }
                Ordering::Equal => {
                    let e = ea.checked_add(*eb).expect("monomial exponent overflow");
                    out.push((a.clone(), e));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial { factors: out }
    }

    pub fn pow(&self, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            factors: self
                .factors
                .iter()
                .map(|(v, x)| {
                    (
                        v.clone(),
                        x.checked_mul(e).expect("monomial exponent overflow"),
                    )
                })
                .collect(),
        }
    }

    /// True when `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.factors.iter().all(|(v, e)| other.exponent(v) >= *e)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let factors = other
            .factors
            .iter()
            .filter_map(|(v, e)| {
                let rest = e - self.exponent(v);
                (rest > 0).then(|| (v.clone(), rest))
            })
            .collect();
        Monomial { factors }
    }

    pub fn eval(&self, val: &Valuation) -> Result<Rational, PolyError> {
        let mut acc = Rational::one();
        for (v, e) in &self.factors {
            let x = val
                .get(v.as_ref())
                .ok_or_else(|| PolyError::MissingParameter(v.to_string()))?;
            acc *= Pow::pow(x, *e);
        }
        Ok(acc)
    }
}

/// Graded lexicographic order: total degree first, then the exponent of the
/// alphabetically smallest variable decides.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (a, b) = (&self.factors, &other.factors);
        for k in 0..a.len().min(b.len()) {
            let (va, ea) = &a[k];
            let (vb, eb) = &b[k];
            match va.cmp(vb) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match ea.cmp(eb) {
                    Ordering::Equal => {}
                    ord => return ord,
                },
            }
        }
        a.len().cmp(&b.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
