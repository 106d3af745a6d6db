use proptest::prelude::*;

use hasse_forms::curvepoints::closed_points;
use hasse_forms::forms::{diagonalize_field, disc_class, is_unimodular, FieldForm, DEFAULT_BUDGET};
use hasse_forms::*;

fn field(p: u32) -> FqField {
    make_extension(p, 1).unwrap()
}

fn arb_field() -> impl Strategy<Value = FqField> {
    prop_oneof![Just((3u32, 1usize)), Just((5, 1)), Just((7, 1)), Just((3, 2))]
        .prop_map(|(p, k)| make_extension(p, k).unwrap())
}

fn arb_sym(f: FqField, n: usize) -> impl Strategy<Value = FieldForm> {
    let q = f.q();
    proptest::collection::vec(0..q, n * (n + 1) / 2).prop_map(move |v| {
        let mut e = vec![f.zero(); n * n];
        let mut it = v.into_iter();
        for i in 0..n {
            for j in i..n {
                let x = f.elements().nth(it.next().unwrap() as usize).unwrap();
                e[i * n + j] = x.clone();
                e[j * n + i] = x;
            }
        }
        FieldForm::new(&f, n, e).unwrap()
    })
}

fn arb_invertible(f: FqField, n: usize) -> impl Strategy<Value = Vec<FqElem>> {
    let q = f.q();
    proptest::collection::vec(0..q, n * n)
        .prop_map(move |v| {
            v.into_iter()
                .map(|i| f.elements().nth(i as usize).unwrap())
                .collect::<Vec<_>>()
        })
        .prop_filter("invertible", move |t| {
            let fld = t[0].field().clone();
            // det(T^t T) = det(T)^2
            let id = FieldForm::diagonal(&fld, &vec![fld.one(); n]).unwrap();
            !id.congruence(t).det().is_zero()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diagonalization_is_a_congruence(
        form in arb_field().prop_flat_map(|f| (1usize..=4).prop_flat_map(move |n| arb_sym(f.clone(), n)))
    ) {
        let d = diagonalize_field(&form);
        let diag = FieldForm::diagonal(form.field(), &d.diag).unwrap();
        prop_assert_eq!(form.congruence(&d.transform), diag);
        prop_assert_eq!(d.diag.iter().filter(|x| !x.is_zero()).count(), form.rank());
    }

    #[test]
    fn disc_class_is_congruence_invariant(
        (form, t) in arb_field().prop_flat_map(|f| (1usize..=3).prop_flat_map(move |n| {
            (arb_sym(f.clone(), n), arb_invertible(f.clone(), n))
        }))
    ) {
        prop_assume!(!form.is_degenerate());
        let moved = form.congruence(&t);
        prop_assert_eq!(disc_class(&moved).unwrap(), disc_class(&form).unwrap());
        prop_assert!(field_isomorphic(&form, &moved).unwrap());
    }
}

#[allow(clippy::needless_range_loop)]
fn arb_gram(n: usize) -> impl Strategy<Value = GramMatrix> {
    let exprs = prop_oneof![
        Just("0"),
        Just("1"),
        Just("2"),
        Just("x"),
        Just("y"),
        Just("x+y"),
        Just("3*x^2+1"),
        Just("x*y+4")
    ];
    proptest::collection::vec(exprs, n * (n + 1) / 2).prop_filter_map("nondegenerate", move |v| {
        let c = CurveSpec::weierstrass_ints(&field(5), 1, 1).unwrap();
        let mut rows = vec![vec![""; n]; n];
        let mut it = v.into_iter();
        for i in 0..n {
            for j in i..n {
                let e = it.next().unwrap();
                rows[i][j] = e;
                rows[j][i] = e;
            }
        }
        let refs: Vec<&[&str]> = rows.iter().map(|r| r.as_slice()).collect();
        GramMatrix::parse(&c, &refs).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn trivial_witness_always_certifies(f in (1usize..=3).prop_flat_map(arb_gram)) {
        let w = GenusWitness { pairs: vec![WitnessPair { q: RingMatrix::identity(f.curve(), f.n()), s: f.curve().one() }] };
        let r = verify_genus_witness(&f, &f, &w, 1).unwrap();
        prop_assert_eq!(r.verdict, GenusVerdict::Certified);
    }

    #[test]
    fn search_results_recheck(f in (1usize..=2).prop_flat_map(arb_gram), swap in any::<bool>()) {
        // G is F moved by a permutation or by a unipotent matrix, so a witness exists.
        let c = f.curve().clone();
        let n = f.n();
        let t = if n == 2 && swap {
            RingMatrix::parse(&c, &[&["0", "1"], &["1", "0"]]).unwrap()
        } else if n == 2 {
            RingMatrix::parse(&c, &[&["1", "1"], &["0", "1"]]).unwrap()
        } else {
            RingMatrix::parse(&c, &[&["4"]]).unwrap()
        };
        let g = GramMatrix::new(RingMatrix::congruence(&t, f.matrix()).unwrap()).unwrap();
        let out = isom_search(&f, &g, SearchBounds { deg_x: 0, deg_y: 0 }, DEFAULT_BUDGET).unwrap();
        let q = out.witness().expect("a constant witness exists");
        prop_assert_eq!(&RingMatrix::congruence(q, f.matrix()).unwrap(), g.matrix());
        prop_assert!(q.det().as_constant().is_some_and(|d| !d.is_zero()));
    }
}

#[test]
fn certified_genus_is_locally_consistent() {
    let f5 = field(5);
    let c = CurveSpec::weierstrass_ints(&f5, 1, 1).unwrap();
    let f = GramMatrix::parse(&c, &[&["1", "x"], &["x", "x^2+2"]]).unwrap();
    let t = RingMatrix::parse(&c, &[&["1", "y"], &["0", "1"]]).unwrap();
    let g = GramMatrix::new(RingMatrix::congruence(&t, f.matrix()).unwrap()).unwrap();
    assert!(is_unimodular(&f) && is_unimodular(&g));
    let w = GenusWitness {
        pairs: vec![WitnessPair { q: t, s: c.one() }],
    };
    let r = verify_genus_witness(&f, &g, &w, 2).unwrap();
    assert_eq!(r.verdict, GenusVerdict::Certified);
    for pt in closed_points(&c, 2).unwrap() {
        assert!(local_isomorphic(&f, &g, &Place::Point(pt)).unwrap());
    }
}

#[test]
fn line_genus_is_locally_consistent() {
    let f7 = field(7);
    let line = CurveSpec::polyline(&f7);
    let f = GramMatrix::parse(&line, &[&["1", "0"], &["0", "3"]]).unwrap();
    let g = GramMatrix::parse(&line, &[&["3", "0"], &["0", "1"]]).unwrap();
    let w = GenusWitness {
        pairs: vec![WitnessPair {
            q: RingMatrix::parse(&line, &[&["0", "1"], &["1", "0"]]).unwrap(),
            s: line.one(),
        }],
    };
    assert_eq!(
        verify_genus_witness(&f, &g, &w, 2).unwrap().verdict,
        GenusVerdict::Certified
    );
    for d in 1..=2 {
        for pi in funcfield::monic_irreducibles(&f7, d) {
            let place = Place::Prime(PrimePoly::finite(pi).unwrap());
            assert!(local_isomorphic(&f, &g, &place).unwrap());
        }
    }
}
