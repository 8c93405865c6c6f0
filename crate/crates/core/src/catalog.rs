//! Named matroids and the constructions that produce them.

use crate::connectivity::is_3_connected;
use crate::error::{Error, Result};
use crate::fields::{matroid_from_matrix, pg_points, MatrixRep};
use crate::matroid::Matroid;
use crate::modularity::{
    circuit_hyperplanes, extend, generated_cut, is_modular_set, modular_cuts, principal_filter_cut,
    relax, ModularCut,
};
use crate::subset::{GroundSet, Subset};

pub fn uniform(rank: usize, n: usize) -> Result<Matroid> {
    if rank > n || n == 0 || n > crate::subset::MAX_ELEMENTS {
        return Err(Error::BadParameters(format!(
            "no uniform matroid U{rank},{n}"
        )));
    }
    Matroid::from_bases(GroundSet::letters(n)?, Subset::full(n).k_subsets(rank))
}

/// Column matroid of the seven nonzero vectors of GF(2)^3, labelled `a..g`
/// in projective-point order.
pub fn fano() -> Matroid {
    let cols = pg_points(3, 2).expect("GF(2) is supported");
    let rep = MatrixRep::from_columns(2, GroundSet::letters(7).unwrap(), cols).unwrap();
    matroid_from_matrix(&rep).unwrap()
}

fn relax_least(m: &Matroid) -> Result<Matroid> {
    let c = circuit_hyperplanes(m)
        .into_iter()
        .min_by(|a, b| a.lex_cmp(*b))
        .ok_or_else(|| Error::ConstructionFailed("no circuit-hyperplane to relax".into()))?;
    relax(m, c)
}

/// The Fano plane with its lexicographically least circuit-hyperplane
/// relaxed.
pub fn non_fano() -> Matroid {
    relax_least(&fano()).unwrap()
}

pub fn fano_dual() -> Matroid {
    fano().dual()
}

pub fn non_fano_dual() -> Matroid {
    non_fano().dual()
}

/// Rank 3 on `a..f` whose only dependent triple is `{a, b, c}`.
pub fn p6() -> Matroid {
    let ground = GroundSet::letters(6).unwrap();
    let abc = Subset(0b111);
    let m =
        Matroid::from_bases(ground, Subset::full(6).k_subsets(3).filter(|&b| b != abc)).unwrap();
    debug_assert_eq!(m.triangles(), vec![abc]);
    m
}

/// `[I_6 | A]` over GF(3), columns labelled `a..l`.
pub fn steiner_matrix() -> MatrixRep {
    const A: [[i64; 6]; 6] = [
        [0, 1, 1, 1, 1, 1],
        [1, 0, 1, -1, -1, 1],
        [1, 1, 0, 1, -1, -1],
        [1, -1, 1, 0, 1, -1],
        [1, -1, -1, 1, 0, 1],
        [1, 1, -1, -1, 1, 0],
    ];
    let rows: Vec<Vec<u8>> = (0..6)
        .map(|i| {
            (0..6)
                .map(|j| (i == j) as u8)
                .chain(A[i].iter().map(|&x| x.rem_euclid(3) as u8))
                .collect()
        })
        .collect();
    MatrixRep::from_rows(3, GroundSet::letters(12).unwrap(), &rows).unwrap()
}

pub fn steiner_s5612() -> Matroid {
    matroid_from_matrix(&steiner_matrix()).unwrap()
}

/// `S / {c, d} \ {a, b}` for a 12-element `S` labelled like
/// [`steiner_matrix`].
pub fn p8_from(s: &Matroid) -> Result<Matroid> {
    let delete = s.mask(["a", "b"])?;
    let contract = s.mask(["c", "d"])?;
    s.minor(contract, delete)
}

pub fn p8() -> Matroid {
    p8_from(&steiner_s5612()).unwrap()
}

/// Relaxes both members of the unique pair of disjoint circuit-hyperplanes.
pub fn relax_disjoint_pair(m: &Matroid) -> Result<Matroid> {
    let chs = circuit_hyperplanes(m);
    let pairs: Vec<(Subset, Subset)> = chs
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| chs[i + 1..].iter().map(move |&b| (a, b)))
        .filter(|(a, b)| a.is_disjoint(*b))
        .collect();
    match pairs.as_slice() {
        [(a, b)] => relax(&relax(m, *a)?, *b),
        _ => Err(Error::ConstructionFailed(format!(
            "expected one disjoint pair of circuit-hyperplanes, found {}",
            pairs.len()
        ))),
    }
}

pub fn p8_double_prime() -> Matroid {
    relax_disjoint_pair(&p8()).unwrap()
}

/// Every way of deleting two and contracting two elements of `s`, reduced
/// to distinct canonical forms. Returns (number of minors, distinct forms).
pub fn p8_choice_sweep(s: &Matroid) -> (usize, usize) {
    let full = s.full();
    let mut forms = std::collections::HashSet::new();
    let mut count = 0;
    for del in full.k_subsets(2) {
        for con in (full - del).k_subsets(2) {
            let minor = s.minor_unchecked(con, full - del - con);
            forms.insert(minor.canonical_form().bytes().to_vec());
            count += 1;
        }
    }
    (count, forms.len())
}

/// Cycle matroid of K4: edges `12, 13, 14, 23, 24, 34` labelled `a..f`,
/// bases the 16 spanning trees.
pub fn mk4() -> Matroid {
    let triangles = [0b001011u32, 0b010101, 0b100110, 0b111000].map(Subset);
    let trees = Subset::full(6)
        .k_subsets(3)
        .filter(|t| !triangles.contains(t));
    Matroid::from_bases(GroundSet::letters(6).unwrap(), trees).unwrap()
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl GroupTable {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0
            || table
                .iter()
                .any(|row| row.len() != n || row.iter().any(|&x| x >= n))
        {
            return Err(Error::InvalidGroup(
                "table must be square with entries in range".into(),
            ));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
        for a in 0..n {
            if !(0..n).any(|b| table[a][b] == identity) {
                return Err(Error::InvalidGroup(format!("element {a} has no inverse")));
            }
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(GroupTable { table, identity })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        GroupTable::new(
            (0..n)
                .map(|a| (0..n).map(|b| (a + b) % n).collect())
                .collect(),
        )
    }

    pub fn klein_four() -> Self {
        GroupTable::new((0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect()).unwrap()
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }
}

/// Ground labels `a1, a2, a3` then `g{i}_{k}` for copy `i` of group element
/// `k`.
pub fn dowling_labels(order: usize) -> Vec<String> {
    let mut labels: Vec<String> = (1..=3).map(|i| format!("a{i}")).collect();
    for i in 1..=3 {
        for k in 0..order {
            labels.push(format!("g{i}_{k}"));
        }
    }
    labels
}

/// The lines of the rank-3 Dowling geometry, as masks over
/// [`dowling_labels`]: three joints' lines carrying a group copy, the
/// two-point lines from each joint into the opposite copy, and the triples
/// whose product is the identity.
pub fn dowling_lines(group: &GroupTable) -> Vec<Subset> {
    let k = group.order();
    let joint = |i: usize| i;
    let elem = |i: usize, g: usize| 3 + i * k + g;
    let mut lines = Vec::new();
    for i in 0..3 {
        let mut l = Subset::EMPTY;
        for g in 0..k {
            l = l.with(elem(i, g));
        }
        for j in 0..3 {
            if j != i {
                l = l.with(joint(j));
            }
        }
        lines.push(l);
    }
    for i in 0..3 {
        for g in 0..k {
            lines.push(Subset::from_indices([joint(i), elem(i, g)]));
        }
    }
    for g1 in 0..k {
        for g2 in 0..k {
            for g3 in 0..k {
                if group.mul(group.mul(g1, g2), g3) == group.identity() {
                    lines.push(Subset::from_indices([
                        elem(0, g1),
                        elem(1, g2),
                        elem(2, g3),
                    ]));
                }
            }
        }
    }
    lines
}

pub fn dowling_q3(group: &GroupTable) -> Result<Matroid> {
    let k = group.order();
    if 3 + 3 * k > crate::subset::MAX_ELEMENTS {
        return Err(Error::GroupTooLarge(k));
    }
    let n = 3 + 3 * k;
    let lines = dowling_lines(group);
    let bases = Subset::full(n)
        .k_subsets(3)
        .filter(|t| !lines.iter().any(|l| t.is_subset(*l)));
    let m = Matroid::from_bases(GroundSet::new(dowling_labels(k))?, bases)?;
    let mut expected: Vec<Subset> = lines.iter().copied().filter(|l| l.len() >= 2).collect();
    expected.sort();
    let mut got = m.lines();
    got.sort();
    // Two-point lines other than those listed cannot exist; every pair lies
    // on a listed line.
    if got != expected {
        return Err(Error::ConstructionFailed(
            "recomputed lines differ from the defining list".into(),
        ));
    }
    Ok(m)
}

/// Labels of the rank-4 spike: tip, then legs `x1..x4`, `y1..y4`.
const SPIKE_LABELS: [&str; 9] = ["t", "x1", "x2", "x3", "x4", "y1", "y2", "y3", "y4"];

/// The binary rank-4 spike with tip `t = 1111`, `x_i = e_i` and
/// `y_i = t - e_i`.
pub fn binary_spike4() -> Matroid {
    let mut cols = vec![vec![1u8; 4]];
    for i in 0..4 {
        cols.push((0..4).map(|j| (i == j) as u8).collect());
    }
    for i in 0..4 {
        cols.push((0..4).map(|j| (i != j) as u8).collect());
    }
    let rep = MatrixRep::from_columns(2, GroundSet::new(SPIKE_LABELS).unwrap(), cols).unwrap();
    matroid_from_matrix(&rep).unwrap()
}

/// The circuit-hyperplane `{x1, x2, x3, y4}` relaxed in [`relaxed_spike4`].
pub fn spike_relaxed_set(m: &Matroid) -> Result<Subset> {
    m.mask(["x1", "x2", "x3", "y4"])
}

fn check_spike(m: &Matroid) -> Result<()> {
    let t = m.mask(["t"])?;
    for i in 1..=4 {
        let leg = m.mask([format!("x{i}"), format!("y{i}")])?;
        if !m.is_circuit(leg | t) {
            return Err(Error::ConstructionFailed(format!(
                "leg {i} is not a triangle"
            )));
        }
    }
    let c = spike_relaxed_set(m)?;
    if !circuit_hyperplanes(m).contains(&c) {
        return Err(Error::ConstructionFailed(
            "designated set is not a circuit-hyperplane".into(),
        ));
    }
    for i in 1..=4 {
        let leg = m.mask([format!("x{i}"), format!("y{i}")])?;
        if c.is_disjoint(leg) {
            return Err(Error::ConstructionFailed(format!("C misses leg {i}")));
        }
    }
    Ok(())
}

pub fn relaxed_spike4() -> Result<Matroid> {
    let spike = binary_spike4();
    check_spike(&spike)?;
    relax(&spike, spike_relaxed_set(&spike)?)
}

/// How the modular cut for the ten-element extension was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutSource {
    PrincipalFilter,
    Generated,
    Enumerated,
}

#[derive(Clone, Debug)]
pub struct SpikeExtension {
    pub matroid: Matroid,
    pub cut: ModularCut,
    pub source: CutSource,
}

/// Extends the relaxed spike by `e` placed on the line spanned by `t` and
/// leg 4 and in the closure of `{x1, x2, x3}`.
pub fn spike_extension10_detailed() -> Result<SpikeExtension> {
    let m = relaxed_spike4()?;
    let line = m.closure(m.mask(["t", "x4", "y4"])?);
    let plane = m.closure(m.mask(["x1", "x2", "x3"])?);
    let accept = |ext: &Matroid| -> bool {
        let l = ext.mask(["t", "x4", "y4", "e"]).unwrap();
        ext.rank_of(l) == 2 && ext.is_flat(l) && is_modular_set(ext, l) && is_3_connected(ext)
    };
    let mut attempts: Vec<(CutSource, ModularCut)> = Vec::new();
    if let Ok(cut) = principal_filter_cut(&m, &[line, plane]) {
        attempts.push((CutSource::PrincipalFilter, cut));
    }
    if let Ok(cut) = generated_cut(&m, &[line, plane]) {
        attempts.push((CutSource::Generated, cut));
    }
    for (source, cut) in attempts {
        let ext = extend(&m, &cut, "e")?;
        if accept(&ext) {
            return Ok(SpikeExtension {
                matroid: ext,
                cut,
                source,
            });
        }
    }
    for cut in modular_cuts(&m, 1_000_000)? {
        if !(cut.contains(line) && cut.contains(plane)) {
            continue;
        }
        let ext = extend(&m, &cut, "e")?;
        if accept(&ext) {
            return Ok(SpikeExtension {
                matroid: ext,
                cut,
                source: CutSource::Enumerated,
            });
        }
    }
    Err(Error::ConstructionFailed(
        "no modular cut yields the required extension".into(),
    ))
}

pub fn spike_extension10() -> Result<Matroid> {
    spike_extension10_detailed().map(|s| s.matroid)
}

/// Catalog entries addressable by name.
pub const NAMES: &[&str] = &[
    "u2,4",
    "u2,5",
    "u3,5",
    "u2,6",
    "u4,6",
    "fano",
    "fano-dual",
    "non-fano",
    "non-fano-dual",
    "p6",
    "s5612",
    "p8",
    "p8pp",
    "mk4",
    "q3-trivial",
    "q3-z2",
    "q3-z3",
    "q3-z4",
    "q3-klein",
    "spike4",
    "relaxed-spike4",
    "spike-ext10",
];

/// Looks up a catalog matroid. Uniform matroids are also accepted as
/// `u<r>,<n>` for any valid parameters.
pub fn by_name(name: &str) -> Result<Matroid> {
    let lower = name.to_ascii_lowercase();
    let m = match lower.as_str() {
        "fano" | "f7" => fano(),
        "fano-dual" | "f7*" => fano_dual(),
        "non-fano" | "f7-" => non_fano(),
        "non-fano-dual" | "f7-*" => non_fano_dual(),
        "p6" => p6(),
        "s5612" => steiner_s5612(),
        "p8" => p8(),
        "p8pp" => p8_double_prime(),
        "mk4" => mk4(),
        "q3-trivial" => dowling_q3(&GroupTable::cyclic(1)?)?,
        "q3-z2" => dowling_q3(&GroupTable::cyclic(2)?)?,
        "q3-z3" => dowling_q3(&GroupTable::cyclic(3)?)?,
        "q3-z4" => dowling_q3(&GroupTable::cyclic(4)?)?,
        "q3-klein" => dowling_q3(&GroupTable::klein_four())?,
        "spike4" => binary_spike4(),
        "relaxed-spike4" => relaxed_spike4()?,
        "spike-ext10" => spike_extension10()?,
        other => {
            let parsed = other.strip_prefix('u').and_then(|rest| {
                let (r, n) = rest.split_once(',')?;
                Some((r.parse::<usize>().ok()?, n.parse::<usize>().ok()?))
            });
            match parsed {
                Some((r, n)) => uniform(r, n)?,
                None => {
                    return Err(Error::BadParameters(format!(
                        "unknown catalog name {name:?}"
                    )))
                }
            }
        }
    };
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(uniform(2, 5).unwrap().bases().len(), 10);
        assert!(uniform(3, 2).is_err());
        let f = fano();
        assert_eq!((f.len(), f.rank(), f.bases().len()), (7, 3, 28));
        assert_eq!(non_fano().bases().len(), 29);
        assert_eq!(mk4().triangles().len(), 4);
    }

    #[test]
    fn group_validation() {
        assert!(GroupTable::new(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert_eq!(GroupTable::cyclic(3).unwrap().order(), 3);
        let big = GroupTable::cyclic(5).unwrap();
        assert!(matches!(dowling_q3(&big), Err(Error::GroupTooLarge(5))));
    }

    #[test]
    fn names_resolve() {
        for name in NAMES {
            by_name(name).unwrap();
        }
        assert_eq!(by_name("U3,7").unwrap().rank(), 3);
        assert!(by_name("nope").is_err());
    }
}
