use alloc::string::String;
use alloc::vec::Vec;

use super::prefix::{adding_machine, code_bits, code_index, BitPrefix};
use super::ternary::{signum_terms, Ternary};
use crate::evalcore::{Ball, Rational};
use crate::{Error, Result};

/// Cylinder enclosure of `h` over all extensions of a prefix of length `L`.
///
/// Every extension satisfies `H ≤ h ≤ H + 3·3^{-E}` where `H` is the partial sum
/// and `E = (L+1) N(s↾L)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub partial: Ternary,
    pub tail_exp: i64,
}

impl Embedding {
    pub fn lower(&self) -> Ternary {
        self.partial.clone()
    }

    pub fn upper(&self) -> Ternary {
        self.partial.add(&Ternary::term(3, self.tail_exp))
    }

    /// Exact center `H + (3/2)·3^{-E}` and radius `(3/2)·3^{-E}`.
    pub fn rational_ball(&self) -> (Rational, Rational) {
        let h = self.partial.to_rational();
        let u = Ternary::term(1, self.tail_exp).to_rational();
        let r = u * Rational::new(3.into(), 2.into());
        (h + &r, r)
    }

    /// Floating-point enclosure; terms below the subnormal range are absorbed into the radius.
    pub fn ball(&self) -> Ball {
        let lo = ternary_ball(&self.partial);
        let hi = ternary_ball(&self.upper());
        lo.hull(hi)
    }
}

fn ternary_ball(t: &Ternary) -> Ball {
    let third = Ball::ONE / Ball::exact(3.0);
    let mut acc = Ball::ZERO;
    let mut tail = 0.0f64;
    for &(p, c) in t.terms() {
        if (0..700).contains(&p) {
            acc = acc + third.powi(p as u32).mul_f64(c as f64);
        } else if p >= 700 {
            tail += (c.unsigned_abs() as f64) * f64::from_bits(1);
        } else {
            acc = acc + Ball::exact(3.0).powi((-p) as u32).mul_f64(c as f64);
        }
    }
    acc.widen(tail)
}

/// `h` on the cylinder of `prefix`: digits 2 at positions `(k+1) N(s↾k)` for each `s_k = 1`.
pub fn embed_h(prefix: &BitPrefix) -> Result<Embedding> {
    let bits = prefix.bits();
    if bits.len() > 120 {
        return Err(Error::Invalid("prefix too long to embed".into()));
    }
    let mut terms = Vec::new();
    for (k, &b) in bits.iter().enumerate() {
        if b {
            terms.push((position(&bits[..k])?, 2));
        }
    }
    Ok(Embedding { partial: Ternary::from_terms(terms), tail_exp: position(bits)? })
}

fn position(bits: &[bool]) -> Result<i64> {
    let n = code_bits(bits);
    let e = n.checked_mul(bits.len() as u128 + 1).filter(|&e| e <= i64::MAX as u128);
    e.map(|e| e as i64).ok_or_else(|| Error::Invalid("exponent overflow".into()))
}

/// `𝔣 = h ∘ σ ∘ h^{-1}` on the depth-`k` cylinder with index `x_index`.
pub fn frak_f(k: usize, x_index: u64) -> Result<(Embedding, Embedding)> {
    if k > 63 || x_index >> k != 0 {
        return Err(Error::Invalid("index out of range".into()));
    }
    let s = BitPrefix::from_index(x_index, k);
    Ok((embed_h(&s)?, embed_h(&adding_machine(&s))?))
}

/// Outcome of the code-increment check along one prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyAReport {
    pub prefix: BitPrefix,
    /// Lengths `n` in `1..=len` where `N(σ(s)↾n) ≠ N(s↾n) + 1`.
    pub exceptions: Vec<usize>,
    /// The single index predicted by the carry pattern.
    pub predicted: Option<usize>,
    pub ok: bool,
}

pub fn verify_property_a(prefix: &BitPrefix) -> Result<PropertyAReport> {
    if prefix.len() > 126 {
        return Err(Error::Invalid("prefix too long".into()));
    }
    let image = adding_machine(prefix);
    let mut exceptions = Vec::new();
    for n in 1..=prefix.len() {
        let a = code_bits(&prefix.bits()[..n]);
        let b = code_bits(&image.bits()[..n]);
        if b != a + 1 {
            exceptions.push(n);
        }
    }
    let predicted = prefix.exceptional_index();
    let ok = match predicted {
        Some(k) => exceptions == [k],
        None => exceptions.is_empty(),
    };
    Ok(PropertyAReport { prefix: prefix.clone(), exceptions, predicted, ok })
}

/// Separation bounds for two cylinders first differing at `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyBReport {
    pub n: usize,
    /// Exponent `(n+1) N(s↾n)` of the reference unit.
    pub unit_exp: i64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl PropertyBReport {
    pub fn ok(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

/// Checks `u ≤ |h(s) - h(t)| ≤ 3u` with `u = 3^{-(n+1)N(s↾n)}` for every pair of extensions.
pub fn verify_property_b(s: &BitPrefix, t: &BitPrefix) -> Result<PropertyBReport> {
    if s.len() != t.len() {
        return Err(Error::Invalid("prefixes of different length".into()));
    }
    let n = s.first_difference(t).ok_or_else(|| Error::Invalid("identical prefixes".into()))?;
    // Order so that the upper cylinder has bit 1 at n.
    let (small, big) = if s.bit(n) { (t, s) } else { (s, t) };
    let es = embed_h(small)?;
    let eb = embed_h(big)?;
    let unit_exp = position(&s.bits()[..n])?;
    let u = Ternary::term(1, unit_exp);
    let gap_lo = eb.lower().sub(&es.upper());
    let gap_hi = eb.upper().sub(&es.lower());
    Ok(PropertyBReport {
        n,
        unit_exp,
        lower_ok: gap_lo.sub(&u).signum() >= 0,
        upper_ok: u.scale(3).sub(&gap_hi).signum() >= 0,
    })
}

/// Counts for an exhaustive sweep, with the first few failures spelled out.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub cases: u64,
    pub failed: u64,
    pub witnesses: Vec<String>,
}

impl SweepReport {
    pub fn passed(&self) -> u64 {
        self.cases - self.failed
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn fail(&mut self, w: impl FnOnce() -> String) {
        self.failed += 1;
        if self.witnesses.len() < 16 {
            self.witnesses.push(w());
        }
    }

    pub fn merge(&mut self, o: SweepReport) {
        self.cases += o.cases;
        self.failed += o.failed;
        for w in o.witnesses {
            if self.witnesses.len() < 16 {
                self.witnesses.push(w);
            }
        }
    }
}

/// Iterating σ from zero visits every prefix of length `k` once before returning.
pub fn sweep_odometer(max_k: usize) -> SweepReport {
    let mut rep = SweepReport::default();
    for k in 0..=max_k.min(24) {
        rep.cases += 1;
        let size = 1usize << k;
        let mut seen = alloc::vec![false; size];
        let mut cur = BitPrefix::zeros(k);
        let mut steps = 0usize;
        loop {
            let i = cur.to_index() as usize;
            if seen[i] {
                break;
            }
            seen[i] = true;
            cur = adding_machine(&cur);
            steps += 1;
        }
        if steps != size || cur.to_index() != 0 {
            rep.fail(|| alloc::format!("k={k}: cycle length {steps}"));
        }
    }
    rep
}

pub fn sweep_property_a(len: usize) -> SweepReport {
    let mut rep = SweepReport::default();
    for idx in 0..(1u64 << len) {
        let p = BitPrefix::from_index(idx, len);
        rep.cases += 1;
        match verify_property_a(&p) {
            Ok(r) if r.ok => {}
            Ok(r) => rep.fail(|| alloc::format!("{p}: exceptions {:?}", r.exceptions)),
            Err(e) => rep.fail(|| alloc::format!("{p}: {e}")),
        }
    }
    rep
}

/// Per-index data for the fast sweeps: digit positions and tail exponent.
struct Table {
    digits: Vec<Vec<i64>>,
    tail: Vec<i64>,
}

impl Table {
    fn new(k: u32) -> Table {
        let size = 1usize << k;
        let mut digits = Vec::with_capacity(size);
        let mut tail = Vec::with_capacity(size);
        for idx in 0..size as u64 {
            digits.push(digit_positions(idx, k));
            tail.push(exp_at(idx, k));
        }
        Table { digits, tail }
    }
}

#[inline]
fn exp_at(idx: u64, n: u32) -> i64 {
    (n as i64 + 1) * code_index(idx, n) as i64
}

/// Positions `(j+1) N(s↾j)` for the digits 2 at indices `j` with `s_j = 1`, increasing.
fn digit_positions(idx: u64, k: u32) -> Vec<i64> {
    (0..k).filter(|&j| (idx >> j) & 1 == 1).map(|j| exp_at(idx, j)).collect()
}

/// Digits at indices `>= n`; the positions are increasing in the index.
fn tail_from(idx: u64, digits: &[i64], n: u32) -> &[i64] {
    let before = (idx & ((1u64 << n) - 1)).count_ones() as usize;
    &digits[before..]
}

struct Buf {
    t: [(i64, i64); 96],
    len: usize,
}

impl Buf {
    fn new() -> Buf {
        Buf { t: [(0, 0); 96], len: 0 }
    }
    fn push(&mut self, p: i64, c: i64) {
        self.t[self.len] = (p, c);
        self.len += 1;
    }
    fn sign(&mut self) -> i32 {
        let s = &mut self.t[..self.len];
        s.sort_unstable_by_key(|x| x.0);
        signum_terms(s)
    }
}

/// `hi - lo` bounds for cylinders `a` (bit 0 at n) and `b` (bit 1 at n), shifted by `shift`.
///
/// Pushes `c·(lower(b) - upper(a))` or `c·(upper(b) - lower(a))` into `buf` without the
/// common prefix, which cancels.
#[allow(clippy::too_many_arguments)]
fn push_gap(buf: &mut Buf, tab: &Table, a: u64, b: u64, n: u32, upper: bool, c: i64, shift: i64) {
    let ta = tail_from(a, &tab.digits[a as usize], n);
    let tb = tail_from(b, &tab.digits[b as usize], n);
    for &p in tb {
        buf.push(p + shift, 2 * c);
    }
    for &p in ta {
        buf.push(p + shift, -2 * c);
    }
    if upper {
        buf.push(tab.tail[b as usize] + shift, 3 * c);
    } else {
        buf.push(tab.tail[a as usize] + shift, -3 * c);
    }
}

/// Every unordered pair at depth `k`, or the pairs selected by `keep(i, j)`.
pub fn sweep_property_b(k: u32, keep: impl Fn(u64, u64) -> bool) -> SweepReport {
    let tab = Table::new(k);
    let size = 1u64 << k;
    let mut rep = SweepReport::default();
    for i in 0..size {
        for j in (i + 1)..size {
            if !keep(i, j) {
                continue;
            }
            rep.cases += 1;
            let n = (i ^ j).trailing_zeros();
            let (a, b) = if (i >> n) & 1 == 0 { (i, j) } else { (j, i) };
            let u = exp_at(a, n);
            let mut lo = Buf::new();
            push_gap(&mut lo, &tab, a, b, n, false, 1, 0);
            lo.push(u, -1);
            let mut hi = Buf::new();
            push_gap(&mut hi, &tab, a, b, n, true, -1, 0);
            hi.push(u, 3);
            if lo.sign() < 0 || hi.sign() < 0 {
                rep.fail(|| alloc::format!("pair ({i},{j}) at depth {k}"));
            }
        }
    }
    rep
}

/// Pairs whose first disagreement `n` avoids the carry exception of either member.
pub fn contraction_eligible(a: u64, b: u64, k: u32) -> bool {
    if a == b {
        return false;
    }
    let n = (a ^ b).trailing_zeros() as usize;
    let exc = |x: u64| {
        let first_zero = (!x).trailing_zeros() as usize;
        if first_zero < k as usize {
            Some(first_zero + 1)
        } else {
            None
        }
    };
    n >= 1 && exc(a) != Some(n) && exc(b) != Some(n)
}

/// Ratio bound `|𝔣 h(s) - 𝔣 h(t)| ≤ 3·3^{-(n+1)} |h(s) - h(t)|` on cylinders.
///
/// Certified as `3^{n+1}·(output upper) ≤ 3·(input lower)` in exact ternary arithmetic.
pub fn sweep_contraction(k: u32, keep: impl Fn(u64, u64) -> bool) -> SweepReport {
    let tab = Table::new(k);
    let size = 1u64 << k;
    let mask = size - 1;
    let mut rep = SweepReport::default();
    for i in 0..size {
        for j in (i + 1)..size {
            if !contraction_eligible(i, j, k) || !keep(i, j) {
                continue;
            }
            rep.cases += 1;
            let n = (i ^ j).trailing_zeros();
            let (a, b) = if (i >> n) & 1 == 0 { (i, j) } else { (j, i) };
            let (sa, sb) = ((a + 1) & mask, (b + 1) & mask);
            let nn = (sa ^ sb).trailing_zeros();
            if nn != n {
                rep.fail(|| alloc::format!("pair ({i},{j}): images first differ at {nn}, not {n}"));
                continue;
            }
            let (oa, ob) = if (sa >> n) & 1 == 0 { (sa, sb) } else { (sb, sa) };
            let mut buf = Buf::new();
            // 3·(lower(b) - upper(a)) - 3^{n+1}·(upper(ob) - lower(oa)) ≥ 0
            push_gap(&mut buf, &tab, a, b, n, false, 1, -1);
            push_gap(&mut buf, &tab, oa, ob, n, true, -1, -(n as i64 + 1));
            if buf.sign() < 0 {
                rep.fail(|| alloc::format!("pair ({i},{j}) at depth {k}"));
            }
        }
    }
    rep
}

/// Distinct depth-`k` cylinders have disjoint enclosures.
pub fn sweep_injectivity(k: u32) -> SweepReport {
    let tab = Table::new(k);
    let size = 1usize << k;
    let mut order: Vec<u64> = (0..size as u64).collect();
    // The order of cylinders is lexicographic from s_0, i.e. bit-reversed index order.
    order.sort_by_key(|&x| x.reverse_bits());
    let mut rep = SweepReport::default();
    for w in order.windows(2) {
        rep.cases += 1;
        let (a, b) = (w[0], w[1]);
        let n = (a ^ b).trailing_zeros();
        let mut buf = Buf::new();
        // lower(b) - upper(a) > 0
        push_gap(&mut buf, &tab, a, b, n, false, 1, 0);
        if buf.sign() <= 0 {
            rep.fail(|| alloc::format!("cylinders {a} and {b} overlap"));
        }
    }
    rep
}

/// Every output enclosure of `𝔣` at depth `k` lies in one interval of the depth-`⌈k/2⌉`
/// middle-thirds approximation.
pub fn sweep_containment(k: u32) -> SweepReport {
    let d = k.div_ceil(2) as i64;
    let mut rep = SweepReport::default();
    let size = 1u64 << k;
    for idx in 0..size {
        rep.cases += 1;
        let img = (idx + 1) & (size - 1);
        let digits = digit_positions(img, k);
        let tail = exp_at(img, k);
        // Digits of H at positions <= d are 2 (never 1); the rest plus the tail fit under 3^{-d}.
        let mut buf = Buf::new();
        buf.push(d, 1);
        for &p in digits.iter().filter(|&&p| p > d) {
            buf.push(p, -2);
        }
        buf.push(tail, -3);
        if buf.sign() < 0 {
            rep.fail(|| alloc::format!("image of {idx} leaves the depth-{d} approximation"));
        }
    }
    rep
}

/// Same sweep through the general prefix API; slower, for cross-checks.
pub fn sweep_property_b_slow(k: usize) -> SweepReport {
    let mut rep = SweepReport::default();
    let size = 1u64 << k;
    for i in 0..size {
        for j in (i + 1)..size {
            rep.cases += 1;
            let s = BitPrefix::from_index(i, k);
            let t = BitPrefix::from_index(j, k);
            match verify_property_b(&s, &t) {
                Ok(r) if r.ok() => {}
                _ => rep.fail(|| alloc::format!("{s} vs {t}")),
            }
        }
    }
    rep
}

/// Run a sweep split over the outer index with a caller-provided pair filter.
pub fn merge_reports(parts: impl IntoIterator<Item = SweepReport>) -> SweepReport {
    let mut out = SweepReport::default();
    for p in parts {
        out.merge(p);
    }
    out
}
