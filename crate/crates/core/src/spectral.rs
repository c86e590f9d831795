//! Spectral types: the rigidity index, `d_max` reductions, the Okubo index
//! and bounded enumeration of basic types.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::katz::{predicted_scheme, shift_scheme};
use crate::scalar::GaussianRational as Scalar;
use crate::scheme::{Part, RiemannScheme};

/// One entry of a column; the label is the eigenvalue when known.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpectralPart {
    pub label: Option<Scalar>,
    pub mult: usize,
}

fn part_cmp(a: &SpectralPart, b: &SpectralPart) -> Ordering {
    b.mult.cmp(&a.mult).then_with(|| a.label.cmp(&b.label))
}

/// A tuple of partitions of a common order; column 0 belongs to `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionTuple {
    columns: Vec<Vec<SpectralPart>>,
}

impl PartitionTuple {
    /// Sorts every column canonically and drops zero parts.
    pub fn new(columns: Vec<Vec<SpectralPart>>) -> Result<Self> {
        let mut columns = columns;
        for c in columns.iter_mut() {
            c.retain(|p| p.mult > 0);
            c.sort_by(part_cmp);
        }
        let totals: Vec<usize> = columns.iter().map(|c| c.iter().map(|p| p.mult).sum()).collect();
        if totals.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::InconsistentColumns(totals));
        }
        Ok(PartitionTuple { columns })
    }

    pub fn from_mults(columns: &[Vec<usize>]) -> Result<Self> {
        Self::new(
            columns
                .iter()
                .map(|c| c.iter().map(|&mult| SpectralPart { label: None, mult }).collect())
                .collect(),
        )
    }

    pub fn from_scheme(s: &RiemannScheme) -> Self {
        let columns = s
            .columns()
            .iter()
            .map(|c| {
                c.iter()
                    .map(|p| SpectralPart {
                        label: Some(p.value.clone()),
                        mult: p.mult,
                    })
                    .collect()
            })
            .collect();
        Self::new(columns).expect("schemes have consistent columns")
    }

    /// The labelled scheme at the given poles, when every label is known.
    pub fn to_scheme(&self, poles: Vec<Scalar>) -> Option<RiemannScheme> {
        let columns = self
            .columns
            .iter()
            .map(|c| {
                c.iter()
                    .map(|p| p.label.clone().map(|v| Part::new(v, p.mult)))
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        RiemannScheme::new(poles, columns).ok()
    }

    pub fn columns(&self) -> &[Vec<SpectralPart>] {
        &self.columns
    }

    pub fn mults(&self) -> Vec<Vec<usize>> {
        self.columns
            .iter()
            .map(|c| c.iter().map(|p| p.mult).collect())
            .collect()
    }

    /// Number of finite points.
    pub fn p(&self) -> usize {
        self.columns.len().saturating_sub(1)
    }

    pub fn is_labelled(&self) -> bool {
        self.columns.iter().flatten().all(|p| p.label.is_some())
    }

    /// Label-free representative modulo permutations of points and of parts.
    pub fn canonical(&self) -> PartitionTuple {
        let mut cols = self.mults();
        cols.sort();
        Self::from_mults(&cols).expect("same totals")
    }

    fn mult(&self, j: usize, nu: usize) -> usize {
        self.columns[j].get(nu).map_or(0, |p| p.mult)
    }
}

pub fn ord(m: &PartitionTuple) -> usize {
    m.columns.first().map_or(0, |c| c.iter().map(|p| p.mult).sum())
}

fn ord_term(m: &PartitionTuple) -> i64 {
    (m.columns.len() as i64 - 2) * ord(m) as i64
}

/// `Σ m_{j,ν}² - (p-1) ord²`.
pub fn idx_spec(m: &PartitionTuple) -> i64 {
    let squares: i64 = m.columns.iter().flatten().map(|p| (p.mult * p.mult) as i64).sum();
    squares - ord_term(m) * ord(m) as i64
}

/// `m_{0,τ_0} + … + m_{p,τ_p} - (p-1) ord` with 1-based `τ_j`; indices
/// outside a column contribute 0.
pub fn d_tau(m: &PartitionTuple, tau: &[usize]) -> i64 {
    let sum: usize = tau
        .iter()
        .enumerate()
        .take(m.columns.len())
        .map(|(j, &t)| if t == 0 { 0 } else { m.mult(j, t - 1) })
        .sum();
    sum as i64 - ord_term(m)
}

/// Per column, the 1-based index of the first maximal multiplicity.
pub fn tau_max(m: &PartitionTuple) -> Vec<usize> {
    m.columns
        .iter()
        .map(|c| {
            let max = c.iter().map(|p| p.mult).max().unwrap_or(0);
            c.iter().position(|p| p.mult == max).map_or(1, |i| i + 1)
        })
        .collect()
}

pub fn d_max(m: &PartitionTuple) -> i64 {
    d_tau(m, &tau_max(m))
}

pub fn is_basic(m: &PartitionTuple) -> bool {
    d_max(m) <= 0
}

/// Labels after `mc_max`: the finite tops are shifted to 0 and the
/// convolution parameter is the sum of all top labels.
fn transport_labels(m: &PartitionTuple) -> Option<PartitionTuple> {
    let poles: Vec<Scalar> = (1..=m.p() as i64).map(Scalar::from_int).collect();
    let s = m.to_scheme(poles)?;
    let tau = tau_max(m);
    let tops: Vec<Scalar> = (0..m.columns.len())
        .map(|j| m.columns[j][tau[j] - 1].label.clone().expect("labelled"))
        .collect();
    let mu: Vec<Scalar> = tops[1..].iter().map(|v| -v).collect();
    let lambda = tops.iter().fold(Scalar::default(), |acc, v| &acc + v);
    let shifted = shift_scheme(&s, &mu).ok()?;
    predicted_scheme(&shifted, &lambda)
        .ok()
        .map(|s| PartitionTuple::from_scheme(&s))
}

/// Subtracts `d_max` at the maximal positions.
pub fn partial_max(m: &PartitionTuple) -> Result<PartitionTuple> {
    let d = d_max(m);
    let tau = tau_max(m);
    if m.is_labelled() {
        let reduced = transport_labels(m);
        if let Some(r) = reduced {
            if r.mults() == unlabelled_reduction(m, d, &tau)?.mults() {
                return Ok(r);
            }
        }
    }
    unlabelled_reduction(m, d, &tau)
}

fn unlabelled_reduction(m: &PartitionTuple, d: i64, tau: &[usize]) -> Result<PartitionTuple> {
    let mut cols = m.columns.clone();
    for (j, col) in cols.iter_mut().enumerate() {
        let Some(part) = col.get_mut(tau[j] - 1) else { continue };
        let v = part.mult as i64 - d;
        if v < 0 {
            return Err(Error::NegativePart(j));
        }
        part.mult = v as usize;
        part.label = None;
    }
    let all_labelled = m.is_labelled();
    let mut out = PartitionTuple::new(cols)?;
    if all_labelled {
        for c in out.columns.iter_mut() {
            for p in c.iter_mut() {
                p.label = None;
            }
        }
    }
    Ok(out)
}

/// Iterates `∂_max` while `ord > 1` and `d_max > 0`.
pub fn katz_reduce(m: &PartitionTuple) -> Result<(PartitionTuple, Vec<PartitionTuple>)> {
    let mut cur = m.clone();
    let mut steps = Vec::new();
    while ord(&cur) > 1 && d_max(&cur) > 0 {
        cur = partial_max(&cur)?;
        steps.push(cur.clone());
    }
    Ok((cur, steps))
}

fn column_max(c: &[SpectralPart]) -> usize {
    c.iter().map(|p| p.mult).max().unwrap_or(0)
}

fn oidx_terms(m: &PartitionTuple) -> Vec<i64> {
    let maxes: Vec<usize> = m.columns.iter().map(|c| column_max(c)).collect();
    let total: usize = maxes.iter().sum();
    maxes.iter().map(|&mk| (total - mk) as i64).collect()
}

/// `(p-1) ord - max_k Σ_{j≠k} max_ν m_{j,ν}`.
pub fn oidx(m: &PartitionTuple) -> i64 {
    ord_term(m) - oidx_terms(m).into_iter().max().unwrap_or(0)
}

/// Spectral types of rank `ord + oidx` reached by moving a point attaining
/// the maximum in `oidx` to infinity and applying a generic convolution.
pub fn onf_types(m: &PartitionTuple) -> Vec<PartitionTuple> {
    let o = oidx(m).max(0) as usize;
    let terms = oidx_terms(m);
    let best = terms.iter().copied().max().unwrap_or(0);
    let mut out = BTreeSet::new();
    for k in (0..m.columns.len()).filter(|&k| terms[k] == best) {
        let mut cols = Vec::new();
        let mut inf = m.mults()[k].clone();
        inf.push(o);
        cols.push(inf);
        for (j, c) in m.mults().into_iter().enumerate() {
            if j == k {
                continue;
            }
            let mut c = c;
            let top = c
                .iter()
                .enumerate()
                .max_by_key(|&(i, v)| (*v, std::cmp::Reverse(i)))
                .map(|(i, _)| i);
            if let Some(i) = top {
                c[i] += o;
            }
            cols.push(c);
        }
        let t = PartitionTuple::from_mults(&cols).expect("same totals");
        out.insert(t.canonical().to_string());
    }
    out.into_iter()
        .map(|s| s.parse().expect("printed types parse"))
        .collect()
}

/// The inequality `Σ_j max{0, d - (m_{j,1} - m_{j,2})} > d`, `d = d_max(m)`.
pub fn lemma_ineq_holds(m: &PartitionTuple) -> Result<bool> {
    let d = d_max(m);
    if d <= 0 {
        return Err(Error::PreconditionFail(format!("d_max = {d} is not positive")));
    }
    let reduced = partial_max(m)?;
    let d2 = d_max(&reduced);
    if d2 <= 0 {
        return Err(Error::PreconditionFail(format!(
            "d_max after one reduction is {d2}, not positive"
        )));
    }
    let lhs: i64 = (0..m.columns.len())
        .map(|j| (d - (m.mult(j, 0) as i64 - m.mult(j, 1) as i64)).max(0))
        .sum();
    Ok(lhs > d)
}

/// Partitions of `n` in non-increasing order, excluding `[n]`.
fn nontrivial_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for v in (1..=rest.min(cap)).rev() {
            cur.push(v);
            rec(rest - v, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n.saturating_sub(1), &mut Vec::new(), &mut out);
    out
}

fn defect(n: usize, c: &[usize]) -> usize {
    n * c[0] - c.iter().map(|v| v * v).sum::<usize>()
}

/// All indivisible basic tuples with the given rigidity index, `ord ≤ max_ord`
/// and at most `max_points` nontrivial columns, one per identification class.
///
/// Since `idx = ord · d_max - Σ_j (ord · max_j - Σ_ν m_{j,ν}²)` and each
/// bracket is non-negative, a basic tuple has total defect at most `-idx`.
pub fn enumerate_basic(target_idx: i64, max_ord: usize, max_points: usize) -> Vec<PartitionTuple> {
    let mut out = Vec::new();
    if target_idx > 0 {
        return out;
    }
    let budget = (-target_idx) as usize;
    for n in 2..=max_ord {
        let parts: Vec<Vec<usize>> = nontrivial_partitions(n)
            .into_iter()
            .filter(|c| defect(n, c) <= budget)
            .collect();
        let mut chosen = Vec::new();
        search(n, &parts, 0, budget, max_points, target_idx, &mut chosen, &mut out);
    }
    out.sort_by(|a, b| ord(a).cmp(&ord(b)).then_with(|| a.to_string().cmp(&b.to_string())));
    out
}

#[allow(clippy::too_many_arguments)]
fn search(
    n: usize,
    parts: &[Vec<usize>],
    start: usize,
    budget: usize,
    max_points: usize,
    target: i64,
    chosen: &mut Vec<usize>,
    out: &mut Vec<PartitionTuple>,
) {
    if chosen.len() >= 3 {
        let cols: Vec<Vec<usize>> = chosen.iter().map(|&i| parts[i].clone()).collect();
        let g = cols.iter().flatten().fold(0usize, |g, &v| g.gcd(&v));
        if g == 1 {
            let t = PartitionTuple::from_mults(&cols).expect("partitions of n");
            if d_max(&t) <= 0 && idx_spec(&t) == target {
                out.push(t.canonical());
            }
        }
    }
    if chosen.len() == max_points {
        return;
    }
    for i in start..parts.len() {
        let dv = defect(n, &parts[i]);
        if dv > budget {
            continue;
        }
        chosen.push(i);
        search(n, parts, i, budget - dv, max_points, target, chosen, out);
        chosen.pop();
    }
}

impl fmt::Display for PartitionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, c) in self.columns.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            for p in c {
                if p.mult >= 10 {
                    write!(f, "({})", p.mult)?;
                } else {
                    write!(f, "{}", p.mult)?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for PartitionTuple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cols = Vec::new();
        for col in s.trim().split(',') {
            let mut parts = Vec::new();
            let mut chars = col.trim().chars();
            while let Some(c) = chars.next() {
                if let Some(d) = c.to_digit(10) {
                    parts.push(d as usize);
                } else if c == '(' {
                    let digits: String = chars.by_ref().take_while(|&c| c != ')').collect();
                    let v = digits
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad part \"({digits})\"")))?;
                    parts.push(v);
                } else {
                    return Err(Error::Parse(format!("unexpected character {c:?} in spectral type")));
                }
            }
            if parts.is_empty() {
                return Err(Error::Parse("empty column in spectral type".into()));
            }
            cols.push(parts);
        }
        PartitionTuple::from_mults(&cols)
    }
}

/// One row of a classification table of basic types.
#[derive(Clone, Copy, Debug)]
pub struct TableRow {
    pub basic: &'static str,
    pub ord: usize,
    pub onf_ord: usize,
    /// Okubo types of minimal rank; alternatives are equivalent.
    pub onf: &'static [&'static str],
}

pub const IDX0_TABLE: [TableRow; 4] = [
    TableRow {
        basic: "11,11,11,11",
        ord: 2,
        onf_ord: 3,
        onf: &["111,21,21,21"],
    },
    TableRow {
        basic: "111,111,111",
        ord: 3,
        onf_ord: 4,
        onf: &["1111,211,211"],
    },
    TableRow {
        basic: "1111,1111,22",
        ord: 4,
        onf_ord: 5,
        onf: &["11111,2111,32"],
    },
    TableRow {
        basic: "111111,222,33",
        ord: 6,
        onf_ord: 7,
        onf: &["1111111,322,43"],
    },
];

pub const IDX_MINUS2_TABLE: [TableRow; 13] = [
    TableRow {
        basic: "11,11,11,11,11",
        ord: 2,
        onf_ord: 4,
        onf: &["211,31,31,31,31"],
    },
    TableRow {
        basic: "111,111,21,21",
        ord: 3,
        onf_ord: 4,
        onf: &["1111,211,31,31"],
    },
    TableRow {
        basic: "1111,22,22,31",
        ord: 4,
        onf_ord: 5,
        onf: &["11111,32,32,41"],
    },
    TableRow {
        basic: "1111,1111,211",
        ord: 4,
        onf_ord: 5,
        onf: &["11111,2111,311"],
    },
    TableRow {
        basic: "211,22,22,22",
        ord: 4,
        onf_ord: 6,
        onf: &["2211,42,42,42", "222,411,42,42"],
    },
    TableRow {
        basic: "11111,221,221",
        ord: 5,
        onf_ord: 6,
        onf: &["111111,321,321"],
    },
    TableRow {
        basic: "11111,11111,32",
        ord: 5,
        onf_ord: 6,
        onf: &["111111,21111,42"],
    },
    TableRow {
        basic: "111111,2211,33",
        ord: 6,
        onf_ord: 7,
        onf: &["1111111,3211,43"],
    },
    TableRow {
        basic: "2211,222,222",
        ord: 6,
        onf_ord: 8,
        onf: &["22211,422,422", "2222,422,4211"],
    },
    TableRow {
        basic: "11111111,332,44",
        ord: 8,
        onf_ord: 9,
        onf: &["111111111,432,54"],
    },
    TableRow {
        basic: "22211,2222,44",
        ord: 8,
        onf_ord: 10,
        onf: &["222211,4222,64", "22222,42211,64"],
    },
    TableRow {
        basic: "22222,3331,55",
        ord: 10,
        onf_ord: 12,
        onf: &["222222,5331,75"],
    },
    TableRow {
        basic: "2222211,444,66",
        ord: 12,
        onf_ord: 14,
        onf: &["22222211,644,86"],
    },
];

/// Enumeration bounds `(idx, max_ord, max_points)` and data of a table.
pub fn table(which: &str) -> Option<(i64, usize, usize, &'static [TableRow])> {
    match which {
        "idx0" => Some((0, 6, 4, &IDX0_TABLE)),
        "idx-2" => Some((-2, 12, 5, &IDX_MINUS2_TABLE)),
        _ => None,
    }
}

/// Outcome of comparing an enumeration against a table.
#[derive(Clone, Debug, Default)]
pub struct TableComparison {
    /// `(basic type, ord, ord + oidx, Okubo types)` of matching rows.
    pub matched: Vec<(String, usize, usize, Vec<String>)>,
    /// Table rows not produced by the enumeration.
    pub missing: Vec<String>,
    /// Enumerated types absent from the table.
    pub extra: Vec<String>,
    /// Rows whose ranks or Okubo types disagree, with a description.
    pub mismatched: Vec<String>,
}

impl TableComparison {
    pub fn is_exact(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.mismatched.is_empty()
    }
}

fn canonical_str(s: &str) -> Result<String> {
    Ok(s.parse::<PartitionTuple>()?.canonical().to_string())
}

pub fn compare_table(found: &[PartitionTuple], rows: &[TableRow]) -> Result<TableComparison> {
    let mut cmp = TableComparison::default();
    let found: Vec<String> = found.iter().map(|t| t.canonical().to_string()).collect();
    for row in rows {
        let key = canonical_str(row.basic)?;
        if !found.contains(&key) {
            cmp.missing.push(row.basic.to_string());
            continue;
        }
        let m: PartitionTuple = row.basic.parse()?;
        let onf_ord = ord(&m) as i64 + oidx(&m);
        let types: Vec<String> = onf_types(&m).iter().map(ToString::to_string).collect();
        let mut expected = row.onf.iter().map(|s| canonical_str(s)).collect::<Result<Vec<_>>>()?;
        expected.sort();
        let mut sorted = types.clone();
        sorted.sort();
        if ord(&m) != row.ord || onf_ord != row.onf_ord as i64 || sorted != expected {
            cmp.mismatched.push(format!(
                "{}: ord {} (table {}), ord+oidx {} (table {}), Okubo types {:?} (table {:?})",
                row.basic,
                ord(&m),
                row.ord,
                onf_ord,
                row.onf_ord,
                types,
                row.onf
            ));
        } else {
            cmp.matched.push((row.basic.to_string(), row.ord, row.onf_ord, types));
        }
    }
    let listed = rows
        .iter()
        .map(|r| canonical_str(r.basic))
        .collect::<Result<Vec<_>>>()?;
    cmp.extra = found.into_iter().filter(|f| !listed.contains(f)).collect();
    Ok(cmp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(s: &str) -> PartitionTuple {
        s.parse().unwrap()
    }

    #[test]
    fn ord_and_idx() {
        assert_eq!(ord(&t("11,11,11,11")), 2);
        assert_eq!(ord(&t("111111,222,33")), 6);
        assert_eq!(ord(&PartitionTuple::from_mults(&[vec![5]]).unwrap()), 5);
        assert_eq!(idx_spec(&t("11,11,11")), 2);
        assert_eq!(idx_spec(&t("11,11,11,11")), 0);
        assert_eq!(idx_spec(&t("11111,221,221")), -2);
    }

    #[test]
    fn d_tau_values() {
        assert_eq!(d_tau(&t("11,11,11"), &[1, 1, 1]), 1);
        assert_eq!(d_tau(&t("11,11,11"), &[5, 5, 5]), -2);
        assert_eq!(d_tau(&t("11,11,11,11"), &[1, 1, 1, 1]), 0);
        assert_eq!(tau_max(&t("21,111,21")), vec![1, 1, 1]);
        assert_eq!(tau_max(&t("11")), vec![1]);
    }

    #[test]
    fn d_max_values() {
        assert_eq!(d_max(&t("11,11,11")), 1);
        assert_eq!(d_max(&t("11,11,11,11")), 0);
        assert_eq!(d_max(&t("111111,222,33")), 0);
        assert!(is_basic(&t("11,11,11,11")));
        assert!(!is_basic(&t("11,11,11")));
        assert!(is_basic(&t("2222211,444,66")));
    }

    #[test]
    fn reductions() {
        let r = partial_max(&t("11,11,11")).unwrap();
        assert_eq!(r.to_string(), "1,1,1");
        let (fin, steps) = katz_reduce(&t("11,11,11,11")).unwrap();
        assert!(steps.is_empty());
        assert_eq!(fin, t("11,11,11,11"));
        let (fin, _) = katz_reduce(&t("111,21,21,21")).unwrap();
        assert_eq!(fin.canonical(), t("11,11,11,11").canonical());
        assert_eq!(partial_max(&t("3,21,111")), Err(Error::NegativePart(1)));
    }

    #[test]
    fn okubo_index() {
        assert_eq!(oidx(&t("111,21,21,21")), 0);
        assert_eq!(oidx(&t("11,11,11,11")), 1);
        assert_eq!(oidx(&t("211,22,22,22")), 2);
        let types: Vec<String> = onf_types(&t("211,22,22,22")).iter().map(ToString::to_string).collect();
        let mut expected = vec![
            t("2211,42,42,42").canonical().to_string(),
            t("222,411,42,42").canonical().to_string(),
        ];
        expected.sort();
        assert_eq!(types, expected);
    }

    #[test]
    fn lemma_inequality() {
        assert!(matches!(
            lemma_ineq_holds(&t("11,11,11,11")),
            Err(Error::PreconditionFail(_))
        ));
        assert!(matches!(
            lemma_ineq_holds(&t("111,21,21,21")),
            Err(Error::PreconditionFail(_))
        ));
        assert!(lemma_ineq_holds(&t("111,111,21")).unwrap());
    }

    #[test]
    fn text_roundtrip_with_large_parts() {
        let m = t("(10)2,(12)");
        assert_eq!(m.mults(), vec![vec![10, 2], vec![12]]);
        assert_eq!(m.to_string(), "(10)2,(12)");
        assert!("1a,11".parse::<PartitionTuple>().is_err());
        assert!("11,1".parse::<PartitionTuple>().is_err());
    }

    #[test]
    fn labelled_reduction_transports_labels() {
        let s = RiemannScheme::new(
            vec![Scalar::from_int(0), Scalar::from_int(1)],
            vec![
                vec![
                    Part::new(Scalar::from_frac(1, 3), 1),
                    Part::new(Scalar::from_frac(1, 5), 1),
                ],
                vec![Part::new(Scalar::from_int(0), 1), Part::new(Scalar::from_frac(1, 2), 1)],
                vec![
                    Part::new(Scalar::from_int(0), 1),
                    Part::new(Scalar::from_frac(-31, 30), 1),
                ],
            ],
        )
        .unwrap();
        let r = partial_max(&PartitionTuple::from_scheme(&s)).unwrap();
        assert!(r.is_labelled());
        assert_eq!(ord(&r), 1);
    }

    #[test]
    fn tables_reproduced() {
        for which in ["idx0", "idx-2"] {
            let (idx, max_ord, max_points, rows) = table(which).unwrap();
            let found = enumerate_basic(idx, max_ord, max_points);
            let cmp = compare_table(&found, rows).unwrap();
            assert!(cmp.is_exact(), "{which}: {cmp:?}");
            assert_eq!(cmp.matched.len(), rows.len());
        }
        assert!(enumerate_basic(2, 8, 5).is_empty());
    }

    fn arb_partition(n: usize) -> impl Strategy<Value = Vec<usize>> {
        proptest::collection::vec(1..=n, 1..=n).prop_map(move |v| {
            let mut out = Vec::new();
            let mut rest = n;
            for x in v {
                if rest == 0 {
                    break;
                }
                let x = x.min(rest);
                out.push(x);
                rest -= x;
            }
            if rest > 0 {
                out.push(rest);
            }
            out
        })
    }

    fn arb_tuple() -> impl Strategy<Value = PartitionTuple> {
        (1usize..=6, 2usize..=4).prop_flat_map(|(n, k)| {
            proptest::collection::vec(arb_partition(n), k + 1)
                .prop_map(|cols| PartitionTuple::from_mults(&cols).unwrap())
        })
    }

    proptest! {
        #[test]
        fn reduction_preserves_idx(m in arb_tuple()) {
            if let Ok(r) = partial_max(&m) {
                prop_assert_eq!(idx_spec(&r), idx_spec(&m));
                prop_assert_eq!(ord(&r) as i64, ord(&m) as i64 - d_max(&m));
            }
        }

        #[test]
        fn rigid_types_reduce_to_rank_one(m in arb_tuple()) {
            if idx_spec(&m) == 2 {
                prop_assert!(d_max(&m) > 0);
                if let Ok((fin, _)) = katz_reduce(&m) {
                    prop_assert_eq!(ord(&fin), 1);
                }
            }
        }

        #[test]
        fn lemma_holds_on_rigid_types(m in arb_tuple()) {
            if idx_spec(&m) == 2 && ord(&m) > 1 {
                match lemma_ineq_holds(&m) {
                    Ok(holds) => prop_assert!(holds),
                    Err(e) => prop_assert!(matches!(e, Error::PreconditionFail(_) | Error::NegativePart(_))),
                }
            }
        }

        #[test]
        fn text_roundtrip(m in arb_tuple()) {
            let back: PartitionTuple = m.to_string().parse().unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
