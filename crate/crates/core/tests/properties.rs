use modline::catalog;
use modline::connectivity::{kappa, lambda, verify_tutte_linking};
use modline::fields::{is_representable, matroid_from_matrix, Field, MatrixRep};
use modline::minors::has_minor;
use modline::modularity::{
    circuit_hyperplanes, extend, generalized_parallel_connection, is_modular_set, modular_cuts,
    relax,
};
use modline::search::Outcome;
use modline::{GroundSet, Matroid, Subset};
use proptest::prelude::*;

/// Rows over GF(q) with entries below q, plus q itself.
fn matrix() -> impl Strategy<Value = (usize, Vec<Vec<u8>>)> {
    (
        prop::sample::select(vec![2usize, 3, 4, 5]),
        2usize..=4,
        4usize..=8,
    )
        .prop_flat_map(|(q, r, n)| {
            let row = prop::collection::vec(0..q as u8, n);
            (Just(q), prop::collection::vec(row, r))
        })
}

fn build(q: usize, rows: &[Vec<u8>]) -> Matroid {
    let ground = GroundSet::letters(rows[0].len()).unwrap();
    matroid_from_matrix(&MatrixRep::from_rows(q, ground, rows).unwrap()).unwrap()
}

fn matroid() -> impl Strategy<Value = Matroid> {
    matrix().prop_map(|(q, rows)| build(q, &rows))
}

fn with_subsets() -> impl Strategy<Value = (Matroid, u32, u32)> {
    matroid().prop_flat_map(|m| {
        let top = 1u32 << m.len();
        (Just(m), 0..top, 0..top)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_is_submodular_and_bounded((m, x, y) in with_subsets()) {
        let (x, y) = (Subset(x), Subset(y));
        prop_assert!(m.rank_of(x) <= x.len());
        prop_assert!(m.rank_of(x | y) + m.rank_of(x & y) <= m.rank_of(x) + m.rank_of(y));
        prop_assert!(m.rank_of(x & y) <= m.rank_of(x));
        prop_assert!(Matroid::from_rank_table(m.ground().clone(), m.rank_table().to_vec()).is_ok());
    }

    #[test]
    fn dual_is_an_involution(m in matroid()) {
        let d = m.dual();
        prop_assert_eq!(d.rank(), m.len() - m.rank());
        prop_assert_eq!(d.bases().len(), m.bases().len());
        prop_assert_eq!(d.dual(), m);
    }

    #[test]
    fn deletion_and_contraction_commute((m, x, y) in with_subsets()) {
        let c = Subset(x);
        let d = Subset(y) - c;
        prop_assume!((c | d) != m.full());
        let both = m.minor(c, d).unwrap();
        let first = m.contract(c).unwrap();
        let then = first.delete(first.mask(m.names(d)).unwrap()).unwrap();
        prop_assert_eq!(&both, &then);
        let other = m.delete(d).unwrap();
        let other = other.contract(other.mask(m.names(c)).unwrap()).unwrap();
        prop_assert_eq!(&both, &other);
        // contraction is dual to deletion
        prop_assert_eq!(m.contract(c).unwrap().dual(), m.dual().delete(c).unwrap());
    }

    #[test]
    fn canonical_form_ignores_labels(m in matroid(), seed in any::<u64>()) {
        let n = m.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let p = m.permuted(&perm, GroundSet::numbered("p", n).unwrap()).unwrap();
        prop_assert_eq!(m.canonical_form().bytes(), p.canonical_form().bytes());
        let iso = m.isomorphism(&p).expect("isomorphic");
        for x in m.full().subsets() {
            let image = Subset::from_indices(x.iter().map(|i| iso[i]));
            prop_assert_eq!(m.rank_of(x), p.rank_of(image));
        }
    }

    #[test]
    fn connectivity_is_self_dual((m, x, _y) in with_subsets()) {
        let x = Subset(x);
        prop_assert_eq!(lambda(&m, x), lambda(&m.dual(), x));
        prop_assert_eq!(lambda(&m, x), lambda(&m, m.full() - x));
    }

    #[test]
    fn kappa_is_symmetric_and_linking_holds((m, x, y) in with_subsets()) {
        let s = Subset(x);
        let t = Subset(y) - s;
        prop_assume!(!s.is_empty() && !t.is_empty());
        let (st, _) = kappa(&m, s, t).unwrap();
        let (ts, _) = kappa(&m, t, s).unwrap();
        prop_assert_eq!(st, ts);
        prop_assert!(st <= lambda(&m, s).min(lambda(&m, t)));
        prop_assert!(verify_tutte_linking(&m, s, t).unwrap().holds());
    }

    #[test]
    fn relaxation_adds_one_basis(m in matroid()) {
        for c in circuit_hyperplanes(&m) {
            let r = relax(&m, c).unwrap();
            prop_assert_eq!(r.bases().len(), m.bases().len() + 1);
            prop_assert!(r.is_basis(c));
        }
    }

    #[test]
    fn extensions_restrict_back(m in matroid(), pick in any::<prop::sample::Index>()) {
        let cuts = modular_cuts(&m, 20_000).unwrap();
        prop_assume!(!cuts.is_empty());
        let cut = &cuts[pick.index(cuts.len())];
        let x = extend(&m, cut, "z").unwrap();
        prop_assert_eq!(x.len(), m.len() + 1);
        prop_assert_eq!(x.restrict(m.full()).unwrap(), m.clone());
        // the new element is spanned by exactly the flats of the cut
        let z = m.len();
        for &f in m.flats() {
            prop_assert_eq!(x.closure(f).contains(z), cut.contains(f));
        }
    }

    #[test]
    fn matrix_row_operations_keep_the_matroid((q, rows) in matrix(), i in 0usize..4, j in 0usize..4, c in 1u8..5) {
        let r = rows.len();
        let (i, j) = (i % r, j % r);
        prop_assume!(i != j && (c as usize) < q);
        let f = Field::get(q).unwrap();
        let mut changed = rows.clone();
        for k in 0..rows[0].len() {
            changed[j][k] = f.add(rows[j][k], f.mul(c, rows[i][k]));
        }
        changed.swap(0, r - 1);
        prop_assert_eq!(build(q, &rows), build(q, &changed));
    }

    #[test]
    fn matrix_matroids_are_representable((q, rows) in matrix()) {
        let m = build(q, &rows);
        let rep = match is_representable(&m, q).unwrap() {
            Outcome::Found(rep) => rep,
            other => return Err(TestCaseError::fail(format!("{:?}", other.decided()))),
        };
        prop_assert_eq!(matroid_from_matrix(&rep).unwrap(), m);
    }

    #[test]
    fn minors_respect_duality(m in matroid()) {
        let u24 = catalog::uniform(2, 4).unwrap();
        prop_assert_eq!(has_minor(&m, &u24).is_found(), has_minor(&m.dual(), &u24.dual()).is_found());
        if let Outcome::Found(w) = has_minor(&m, &u24) {
            prop_assert!(w.validate(&m, &u24));
        }
    }
}

#[test]
fn parallel_connection_restricts_to_both_parts() {
    let fano = catalog::fano();
    for host in ["fano", "q3-z2", "spike-ext10"] {
        let m = catalog::by_name(host).unwrap();
        let tri = m
            .triangles()
            .into_iter()
            .find(|&t| is_modular_set(&m, t))
            .unwrap_or_else(|| m.triangles()[0]);
        let names = m.names(tri);
        let glue = fano.triangles()[0];
        let mut fresh = (1..).map(|i| format!("g{i}"));
        let mut shared = names.iter();
        let labels: Vec<String> = (0..7)
            .map(|i| {
                if glue.contains(i) {
                    shared.next().unwrap().clone()
                } else {
                    fresh.next().unwrap()
                }
            })
            .collect();
        let copy = fano.relabeled(GroundSet::new(labels).unwrap()).unwrap();
        let p = generalized_parallel_connection(&m, &copy).unwrap();
        assert_eq!(p.len(), m.len() + 4);
        assert_eq!(p.rank(), m.rank() + 1);
        for (part, n) in [(&m, m.len()), (&copy, 7)] {
            let keep = p.mask(part.labels()).unwrap();
            for x in Subset::full(n).subsets() {
                let image = p.mask(part.names(x)).unwrap();
                assert_eq!(p.rank_of(image), part.rank_of(x), "{host}");
                assert!(image.is_subset(keep));
            }
        }
        assert!(is_modular_set(&copy, copy.mask(&names).unwrap()));
    }
}
