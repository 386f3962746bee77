//! Brute-force checks at desk scale: every sublattice of bounded index,
//! isomorphism classes at finite precision, and a search for isomorphic
//! subalgebras of different index.

mod modp;

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LieLattice;
use crate::padic::{rat, smith_profile, Prime, QMatrix, Rational, SmithProfile};
use crate::stability::iso_index_check;
use crate::sublattice::Sublattice;
use modp::Tensor;

/// Exhaustive scans run only when `|GL_d(F_p)|` stays below this.
pub const EXHAUSTIVE_LIMIT: u128 = 20_000;
/// Mod-`p` solutions tried for lifting, per pair.
const MAX_LIFTS: usize = 64;
/// Signed permutations are tried up to this rank.
const MAX_PERMUTATION_RANK: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumEntry {
    pub hnf: QMatrix,
    pub index: u64,
    pub subalgebra: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumReport {
    pub p: Prime,
    pub max_exponent: u32,
    pub sublattices: Vec<EnumEntry>,
    /// `counts[k]` sublattices of index `p^k`.
    pub counts: Vec<u64>,
    pub subalgebra_counts: Vec<u64>,
}

impl EnumReport {
    pub fn total(&self) -> usize {
        self.sublattices.len()
    }

    pub fn subalgebras(&self) -> impl Iterator<Item = &EnumEntry> {
        self.sublattices.iter().filter(|e| e.subalgebra)
    }
}

/// Exponent vectors with sum at most `k`, lexicographically ascending.
fn exponent_vectors(d: usize, k: u32) -> Vec<Vec<u32>> {
    fn go(d: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for a in 0..=left {
            cur.push(a);
            go(d, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(d, k, &mut Vec::new(), &mut out);
    out
}

/// Every sublattice of index at most `p^k`, as lower-triangular Hermite
/// forms with pivots `p^(a_i)` and row `i` reduced into `[0, p^(a_i))`.
/// Order: pivot exponents lexicographically, then off-pivot entries.
pub fn enum_subalgebras(l: &LieLattice, k: u32, budget: u64) -> Result<EnumReport> {
    let p = l.p();
    let d = l.dim();
    let mut out = Vec::new();
    let mut counts = vec![0u64; k as usize + 1];
    let mut subalgebra_counts = vec![0u64; k as usize + 1];
    for a in exponent_vectors(d, k) {
        let moduli: Vec<u64> = a.iter().map(|&x| p.get().saturating_pow(x)).collect();
        let slots: Vec<(usize, usize)> = (0..d)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .filter(|&(i, _)| moduli[i] > 1)
            .collect();
        let mut digits = vec![0u64; slots.len()];
        loop {
            if out.len() as u64 >= budget {
                return Err(Error::Budget {
                    partial: out.len() as u64,
                });
            }
            let mut h = QMatrix::zeros(d, d);
            for i in 0..d {
                h[(i, i)] = Rational::from_integer(p.pow(a[i]));
            }
            for (&(i, j), &x) in slots.iter().zip(&digits) {
                h[(i, j)] = rat(x as i64);
            }
            let index: u64 = a.iter().map(|&x| x as u64).sum();
            let subalgebra = Sublattice::from_hnf(l, h.clone()).is_subalgebra();
            counts[index as usize] += 1;
            if subalgebra {
                subalgebra_counts[index as usize] += 1;
            }
            out.push(EnumEntry {
                hnf: h,
                index,
                subalgebra,
            });

            // odometer, last slot fastest
            let mut pos = slots.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < moduli[slots[pos].0] {
                    break;
                }
                digits[pos] = 0;
            }
            if digits.iter().all(|&x| x == 0) {
                break;
            }
        }
    }
    Ok(EnumReport {
        p,
        max_exponent: k,
        sublattices: out,
        counts,
        subalgebra_counts,
    })
}

/// Isomorphism invariants of a subalgebra viewed as a lattice in its own
/// right.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IsoInvariants {
    /// Elementary divisors of the Killing form on the sublattice.
    pub gram: SmithProfile,
    /// Elementary divisors of the bracket map `Λ²M → M`.
    pub brackets: SmithProfile,
    pub lower_central_ranks: Vec<usize>,
    pub derived_ranks: Vec<usize>,
}

pub fn invariants(m: &Sublattice<'_>) -> Result<IsoInvariants> {
    let t = m.transported()?;
    let p = t.p();
    let d = t.dim();
    let gram = smith_profile(&t.killing_matrix()?.matrix, p)?;
    let cols: Vec<Vec<Rational>> = (0..d)
        .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
        .map(|(i, j)| t.basis_bracket(i, j))
        .collect();
    let brackets = if cols.is_empty() {
        SmithProfile {
            exponents: vec![],
            total: 0,
        }
    } else {
        smith_profile(&QMatrix::from_columns(&cols)?, p)?
    };
    let series = t.series_profile();
    Ok(IsoInvariants {
        gram,
        brackets,
        lower_central_ranks: series.lower_central_ranks,
        derived_ranks: series.derived_ranks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "exhaustive-mod-p")]
    ExhaustiveModP,
    #[serde(rename = "lifted-mod-p^e")]
    LiftedModPe,
    #[serde(rename = "invariants-only")]
    InvariantsOnly,
}

impl Method {
    fn choose(d: usize, p: Prime, e: u32) -> Method {
        if d <= 3 && modp::gl_order(d, p.get()) <= EXHAUSTIVE_LIMIT {
            if e == 1 {
                Method::ExhaustiveModP
            } else {
                Method::LiftedModPe
            }
        } else {
            Method::InvariantsOnly
        }
    }
}

/// An isomorphism between two items mod `p^e`, in their own coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoundIso {
    pub from: usize,
    pub to: usize,
    /// Row-major, entries in `[0, p^e)`.
    pub map: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoClassReport {
    pub precision: u32,
    pub method: Method,
    pub invariants: Vec<IsoInvariants>,
    pub classes: Vec<Vec<usize>>,
    pub isomorphisms: Vec<FoundIso>,
    /// Pairs isomorphic mod `p` where no tried solution lifted to `p^e`.
    pub unresolved: Vec<(usize, usize)>,
}

enum Search {
    Found(Vec<u64>),
    Unlifted,
    Absent,
}

struct Reduced {
    mod_p: Tensor,
    mod_q: Tensor,
}

impl Reduced {
    fn new(t: &LieLattice, e: u32) -> Result<Self> {
        Ok(Reduced {
            mod_p: Tensor::reduce(t, 1)?,
            mod_q: Tensor::reduce(t, e)?,
        })
    }
}

fn structured_candidates(d: usize) -> Vec<Vec<i64>> {
    if d <= MAX_PERMUTATION_RANK {
        modp::signed_permutations(d)
    } else {
        let mut id = vec![0i64; d * d];
        for i in 0..d {
            id[i * d + i] = 1;
        }
        vec![id]
    }
}

/// Looks for a Lie isomorphism `m → n` mod `p^e`: signed permutations first,
/// then (when `scan`) every mod-`p` solution, lifted.
fn find_iso(m: &Reduced, n: &Reduced, p: Prime, scan: bool) -> Search {
    let q = m.mod_q.q;
    let d = m.mod_q.d;
    for g in structured_candidates(d) {
        let g = modp::reduce_signed(&g, q);
        if modp::is_lie_map(&g, &m.mod_q, &n.mod_q) {
            return Search::Found(g);
        }
    }
    if !scan {
        return Search::Absent;
    }
    let mut seen = 0usize;
    let mut found = None;
    modp::scan_mod_p(&m.mod_p, &n.mod_p, |g| {
        seen += 1;
        found = if q == p.get() {
            Some(g.to_vec())
        } else {
            modp::hensel_lift(g, &m.mod_q, &n.mod_q, p)
        };
        found.is_some() || seen >= MAX_LIFTS
    });
    match found {
        Some(g) => Search::Found(g),
        None if seen > 0 => Search::Unlifted,
        None => Search::Absent,
    }
}

fn to_rows(g: &[u64], d: usize) -> Vec<Vec<u64>> {
    g.chunks(d).map(<[u64]>::to_vec).collect()
}

/// Partitions subalgebras by their invariants, then (when the scan budget
/// allows) by isomorphism mod `p^e`.
pub fn classify_mod_pk(l: &LieLattice, items: &[Sublattice<'_>], e: u32) -> Result<IsoClassReport> {
    if e == 0 {
        return Err(Error::InvalidInput("precision must be at least 1".into()));
    }
    let p = l.p();
    let method = Method::choose(l.dim(), p, e);
    let mut invs = Vec::with_capacity(items.len());
    let mut reduced = Vec::with_capacity(items.len());
    for (idx, m) in items.iter().enumerate() {
        if !m.is_subalgebra() {
            return Err(Error::InvalidInput(format!("item {idx} is not a subalgebra")));
        }
        invs.push(invariants(m)?);
        reduced.push(Reduced::new(&m.transported()?, e)?);
    }

    let mut groups: BTreeMap<&IsoInvariants, Vec<usize>> = BTreeMap::new();
    let mut order = Vec::new();
    for (idx, inv) in invs.iter().enumerate() {
        let g = groups.entry(inv).or_default();
        if g.is_empty() {
            order.push(inv);
        }
        g.push(idx);
    }

    let scan = method != Method::InvariantsOnly;
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut isomorphisms = Vec::new();
    let mut unresolved = Vec::new();
    for inv in order {
        let members = &groups[inv];
        let first_class = classes.len();
        for &idx in members {
            let mut placed = false;
            for class in classes[first_class..].iter_mut() {
                let rep = class[0];
                match find_iso(&reduced[rep], &reduced[idx], p, scan) {
                    Search::Found(g) => {
                        isomorphisms.push(FoundIso {
                            from: rep,
                            to: idx,
                            map: to_rows(&g, l.dim()),
                        });
                        class.push(idx);
                        placed = true;
                        break;
                    }
                    Search::Unlifted => unresolved.push((rep, idx)),
                    Search::Absent if !scan => {
                        // invariants alone decide the class
                        class.push(idx);
                        placed = true;
                        break;
                    }
                    Search::Absent => {}
                }
            }
            if !placed {
                classes.push(vec![idx]);
            }
        }
    }
    Ok(IsoClassReport {
        precision: e,
        method,
        invariants: invs,
        classes,
        isomorphisms,
        unresolved,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub m: QMatrix,
    pub n: QMatrix,
    pub index_m: u64,
    pub index_n: u64,
    /// Ambient map carrying `m` onto `n`, verified exactly.
    pub witness: QMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityCheckReport {
    pub p: Prime,
    pub max_exponent: u32,
    pub precision: u32,
    pub method: Method,
    pub sublattices: usize,
    pub subalgebras: usize,
    pub pairs_examined: u64,
    pub violations: Vec<Violation>,
    /// Pairs that matched mod `p` without an exact witness.
    pub unresolved_pairs: u64,
}

/// `B_N g B_M⁻¹` for an integer matrix `g` in sublattice coordinates.
fn ambient_map(m: &Sublattice<'_>, n: &Sublattice<'_>, g: &[i64]) -> QMatrix {
    let d = m.parent().dim();
    let gm = QMatrix::new(d, d, g.iter().map(|&x| rat(x)).collect()).expect("d*d entries");
    &(n.basis() * &gm) * &m.basis().inverse().expect("full-rank basis")
}

fn verified_violation(l: &LieLattice, m: &Sublattice<'_>, n: &Sublattice<'_>, g: &[i64]) -> Option<Violation> {
    let phi = ambient_map(m, n, g);
    if phi.det().ok()?.is_zero() {
        return None;
    }
    let r = iso_index_check(l, m, n, &phi).ok()?;
    (!r.equal).then(|| Violation {
        m: m.hnf().clone(),
        n: n.hnf().clone(),
        index_m: r.index_m,
        index_n: r.index_n,
        witness: phi,
    })
}

/// Looks for isomorphic subalgebras of index at most `p^k` with different
/// indices. Only pairs with an exactly verified ambient isomorphism are
/// reported; mod-`p^e` matches that fail to lift exactly are counted as
/// unresolved. `budget` caps both the enumeration and the pairs examined.
pub fn exhaustive_stability_check(l: &LieLattice, k: u32, e: u32, budget: u64) -> Result<StabilityCheckReport> {
    if e == 0 {
        return Err(Error::InvalidInput("precision must be at least 1".into()));
    }
    let p = l.p();
    let d = l.dim();
    let method = Method::choose(d, p, e);
    let report = enum_subalgebras(l, k, budget)?;
    let subs: Vec<Sublattice<'_>> = report
        .subalgebras()
        .map(|entry| Sublattice::from_hnf(l, entry.hnf.clone()))
        .collect();
    // Pairing key. The Killing-Gram total is v_p(det A) + 2 index, and for
    // perfect rank-3 lattices the bracket profile total shifts by the index
    // too, so either would settle semisimple cases before any search. When
    // the mod-p scan is affordable only the series ranks are used; otherwise
    // the bracket profile is added to keep the pair count down.
    let scan = method != Method::InvariantsOnly;
    let mut invs = Vec::with_capacity(subs.len());
    let mut reduced = Vec::with_capacity(subs.len());
    for m in &subs {
        let inv = invariants(m)?;
        let brackets = if scan { None } else { Some(inv.brackets) };
        invs.push((brackets, inv.lower_central_ranks, inv.derived_ranks));
        reduced.push(Reduced::new(&m.transported()?, e)?);
    }

    let q = reduced.first().map_or(1, |r| r.mod_q.q);
    let candidates = structured_candidates(d);
    let mut pairs = 0u64;
    let mut violations = Vec::new();
    let mut unresolved = 0u64;
    for i in 0..subs.len() {
        for j in 0..subs.len() {
            if subs[i].index() >= subs[j].index() || invs[i] != invs[j] {
                continue;
            }
            if pairs >= budget {
                return Err(Error::Budget { partial: pairs });
            }
            pairs += 1;
            let (m, n) = (&subs[i], &subs[j]);
            let mut hit = candidates.iter().find_map(|g| {
                let gq = modp::reduce_signed(g, q);
                if modp::is_lie_map(&gq, &reduced[i].mod_q, &reduced[j].mod_q) {
                    verified_violation(l, m, n, g)
                } else {
                    None
                }
            });
            if hit.is_none() && scan {
                let mut seen = 0usize;
                let mut matched = false;
                modp::scan_mod_p(&reduced[i].mod_p, &reduced[j].mod_p, |g0| {
                    seen += 1;
                    let lifted = if e == 1 {
                        Some(g0.to_vec())
                    } else {
                        modp::hensel_lift(g0, &reduced[i].mod_q, &reduced[j].mod_q, p)
                    };
                    if let Some(g) = lifted {
                        matched = true;
                        hit = verified_violation(l, m, n, &modp::symmetric_lift(&g, q));
                    }
                    hit.is_some() || seen >= MAX_LIFTS
                });
                if hit.is_none() && matched {
                    unresolved += 1;
                }
            }
            violations.extend(hit);
        }
    }
    Ok(StabilityCheckReport {
        p,
        max_exponent: k,
        precision: e,
        method,
        sublattices: report.total(),
        subalgebras: subs.len(),
        pairs_examined: pairs,
        violations,
        unresolved_pairs: unresolved,
    })
}
