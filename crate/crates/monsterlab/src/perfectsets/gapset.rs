use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::evalcore::{int, rat, Rational};
use crate::{Error, Result};

/// How a gap set was produced, and therefore how to deepen it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// Middle-thirds construction on `[0, 1]` to the given depth.
    Ternary(u32),
    /// The hat of another generator.
    Hat(Box<Generator>),
    /// The ex111 carrier: middle-thirds gaps, used with the triangle profile.
    Ex111(u32),
    /// A fixed list; deepening is the identity.
    Explicit,
}

impl Generator {
    pub fn deepen(&self) -> Generator {
        match self {
            Generator::Ternary(d) => Generator::Ternary(d + 1),
            Generator::Ex111(d) => Generator::Ex111(d + 1),
            Generator::Hat(g) => Generator::Hat(Box::new(g.deepen())),
            Generator::Explicit => Generator::Explicit,
        }
    }

    pub fn parse(s: &str) -> Result<Generator> {
        let s = s.trim();
        if s == "explicit" {
            return Ok(Generator::Explicit);
        }
        if let Some(inner) = s.strip_prefix("hat(").and_then(|r| r.strip_suffix(')')) {
            return Ok(Generator::Hat(Box::new(Generator::parse(inner)?)));
        }
        let depth = |r: &str| r.parse::<u32>().map_err(|_| Error::Invalid(format!("bad generator {s:?}")));
        if let Some(r) = s.strip_prefix("ternary:") {
            return Ok(Generator::Ternary(depth(r)?));
        }
        if let Some(r) = s.strip_prefix("ex111:") {
            return Ok(Generator::Ex111(depth(r)?));
        }
        Err(Error::Invalid(format!("unknown generator {s:?}")))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Ternary(d) => write!(f, "ternary:{d}"),
            Generator::Ex111(d) => write!(f, "ex111:{d}"),
            Generator::Hat(g) => write!(f, "hat({g})"),
            Generator::Explicit => write!(f, "explicit"),
        }
    }
}

/// A closed subset of `[lo, hi]`: the hull minus finitely many disjoint open gaps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapSet {
    pub lo: Rational,
    pub hi: Rational,
    /// Sorted, pairwise disjoint open intervals strictly inside the hull.
    pub gaps: Vec<(Rational, Rational)>,
    pub generator: Generator,
}

impl GapSet {
    /// Validating constructor. Gaps are sorted; overlapping or touching-out-of-hull gaps are rejected.
    pub fn new(lo: Rational, hi: Rational, mut gaps: Vec<(Rational, Rational)>, generator: Generator) -> Result<GapSet> {
        if lo > hi {
            return Err(Error::Invalid("hull with lo > hi".to_string()));
        }
        gaps.sort();
        for (a, b) in &gaps {
            if a >= b {
                return Err(Error::Invalid("empty gap".to_string()));
            }
            if a < &lo || b > &hi {
                return Err(Error::Invalid("gap not strictly inside the hull".to_string()));
            }
        }
        for w in gaps.windows(2) {
            if w[0].1 > w[1].0 {
                return Err(Error::Invalid("overlapping gaps".to_string()));
            }
        }
        Ok(GapSet { lo, hi, gaps, generator })
    }

    pub fn interval(lo: Rational, hi: Rational) -> Result<GapSet> {
        GapSet::new(lo, hi, Vec::new(), Generator::Explicit)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        if x < &self.lo || x > &self.hi {
            return false;
        }
        self.gap_index(x).is_none()
    }

    /// Index of the gap containing `x` (open), if any.
    pub fn gap_index(&self, x: &Rational) -> Option<usize> {
        let i = self.gaps.partition_point(|(a, _)| a < x);
        if i == 0 {
            return None;
        }
        let (a, b) = &self.gaps[i - 1];
        if a < x && x < b {
            Some(i - 1)
        } else {
            None
        }
    }

    /// Maximal closed intervals of the set, left to right. Degenerate `[p, p]` allowed.
    pub fn components(&self) -> Vec<(Rational, Rational)> {
        let mut out = Vec::with_capacity(self.gaps.len() + 1);
        let mut left = self.lo.clone();
        for (a, b) in &self.gaps {
            out.push((left.clone(), a.clone()));
            left = b.clone();
        }
        out.push((left, self.hi.clone()));
        out
    }

    /// Gap endpoints together with the hull endpoints, sorted and deduplicated.
    pub fn endpoints(&self) -> Vec<Rational> {
        let mut v = Vec::with_capacity(2 * self.gaps.len() + 2);
        v.push(self.lo.clone());
        for (a, b) in &self.gaps {
            v.push(a.clone());
            v.push(b.clone());
        }
        v.push(self.hi.clone());
        v.dedup();
        v
    }

    pub fn gap_length_sum(&self) -> Rational {
        self.gaps.iter().fold(Rational::zero(), |acc, (a, b)| acc + (b - a))
    }

    /// `true` when `other ⊆ self`.
    pub fn contains_set(&self, other: &GapSet) -> bool {
        if other.lo < self.lo || other.hi > self.hi {
            return false;
        }
        // Every gap of self that meets other's hull must lie inside a gap of other.
        for (a, b) in &self.gaps {
            if b <= &other.lo || a >= &other.hi {
                continue;
            }
            let covered = other.gaps.iter().any(|(c, d)| c <= a && b <= d);
            if !covered {
                return false;
            }
        }
        true
    }

    /// Deepen along the generator; explicit sets are returned unchanged.
    pub fn deepen(&self) -> GapSet {
        match &self.generator {
            Generator::Ternary(d) => cantor_ternary(d + 1),
            Generator::Ex111(d) => {
                let mut g = cantor_ternary(d + 1);
                g.generator = Generator::Ex111(d + 1);
                g
            }
            Generator::Hat(inner) => {
                let base = GapSet { generator: (**inner).clone(), ..self.clone() };
                hat(&base.deepen())
            }
            Generator::Explicit => self.clone(),
        }
    }
}

/// Middle-thirds Cantor set approximation on `[0, 1]`.
pub fn cantor_ternary(depth: u32) -> GapSet {
    let mut gaps = Vec::with_capacity((1usize << depth.min(24)).saturating_sub(1));
    let mut intervals: Vec<(Rational, Rational)> = alloc::vec![(Rational::zero(), Rational::one())];
    let third = rat(1, 3);
    for _ in 0..depth {
        let mut next = Vec::with_capacity(intervals.len() * 2);
        for (a, b) in &intervals {
            let t = (b - a) * &third;
            let p = a + &t;
            let q = b - &t;
            gaps.push((p.clone(), q.clone()));
            next.push((a.clone(), p));
            next.push((q, b.clone()));
        }
        intervals = next;
    }
    gaps.sort();
    GapSet { lo: int(0), hi: int(1), gaps, generator: Generator::Ternary(depth) }
}

/// Add the closed middle third of every gap back into the set.
pub fn hat(q: &GapSet) -> GapSet {
    let three = int(3);
    let mut gaps = Vec::with_capacity(2 * q.gaps.len());
    for (a, b) in &q.gaps {
        let t = (b - a) / &three;
        gaps.push((a.clone(), a + &t));
        gaps.push((b - &t, b.clone()));
    }
    GapSet { lo: q.lo.clone(), hi: q.hi.clone(), gaps, generator: Generator::Hat(Box::new(q.generator.clone())) }
}

impl fmt::Display for GapSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] minus {} gaps ({})", self.lo, self.hi, self.gaps.len(), self.generator)
    }
}

/// Parse helper for callers that hold endpoints as strings.
pub fn gapset_from_strings(hull: (&str, &str), gaps: &[(String, String)], generator: &str) -> Result<GapSet> {
    use crate::evalcore::parse_rational;
    let lo = parse_rational(hull.0)?;
    let hi = parse_rational(hull.1)?;
    let gaps = gaps
        .iter()
        .map(|(a, b)| Ok((parse_rational(a)?, parse_rational(b)?)))
        .collect::<Result<Vec<_>>>()?;
    GapSet::new(lo, hi, gaps, Generator::parse(generator)?)
}
