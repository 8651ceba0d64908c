use std::fmt::Debug;

use proptest::prelude::*;

use hecketree::affine::{
    m_multiply, nf_multiply, nf_star, p_projection, q_projection, AffineEnd, MBasisIndex, Monomial,
    Toeplitz, ToeplitzNF,
};
use hecketree::coeff::{
    format_coefficient, is_nonnegative_integer, parse_coefficient, ratio, Coefficient,
};
use hecketree::iwahori::{self, DihedralWord, ExtendedIndex, Iwahori, IwahoriParams, Letter};
use hecketree::ktheory::{
    cokernel, kernel_rank, smith_normal_form, truncated_limit, BratteliDiagram, IntegerMatrix,
};
use hecketree::labels::{self, OutputRecord};
use hecketree::sl2::{self, OrbitCoset, PruferElement, Sl2Hecke};
use hecketree::spherical::{self, Spherical, SphericalIndex, SphericalParams};
use hecketree::tree::TreeBall;
use hecketree::{BasisProvider, HeckeElement};

fn coefficient() -> impl Strategy<Value = Coefficient> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn element<B: Ord + Clone + Debug>(
    index: impl Strategy<Value = B>,
) -> impl Strategy<Value = HeckeElement<B>> {
    proptest::collection::vec((index, coefficient()), 0..4).prop_map(HeckeElement::from_terms)
}

fn check_axioms<P: BasisProvider>(
    p: &P,
    x: &HeckeElement<P::Index>,
    y: &HeckeElement<P::Index>,
    z: &HeckeElement<P::Index>,
) -> Result<(), TestCaseError> {
    let xy = x.multiply(y, p);
    prop_assert_eq!(xy.multiply(z, p), x.multiply(&y.multiply(z, p), p));
    prop_assert_eq!(xy.star(p), y.star(p).multiply(&x.star(p), p));
    prop_assert_eq!(xy.r_hom(p), x.r_hom(p) * y.r_hom(p));
    prop_assert_eq!(x.star(p).star(p), x.clone());
    Ok(())
}

fn check_constants<P: BasisProvider>(
    p: &P,
    a: &P::Index,
    b: &P::Index,
) -> Result<(), TestCaseError> {
    for (_, c) in &p.multiply_basis(a, b) {
        prop_assert!(is_nonnegative_integer(c));
    }
    Ok(())
}

fn spherical_params() -> impl Strategy<Value = SphericalParams> {
    prop_oneof![
        (2u64..=4).prop_map(|q| SphericalParams::homogeneous(q).unwrap()),
        (2u64..=3, 2u64..=3).prop_map(|(a, b)| SphericalParams::two_orbit(a, b).unwrap()),
    ]
}

fn word(max: u32) -> impl Strategy<Value = DihedralWord> {
    (any::<bool>(), 0..=max)
        .prop_map(|(s, n)| DihedralWord::alternating(if s { Letter::S } else { Letter::T }, n))
}

fn extended(max: u32, with_i: bool) -> impl Strategy<Value = ExtendedIndex> {
    (any::<bool>(), word(max)).prop_map(move |(i, w)| ExtendedIndex {
        iflag: i && with_i,
        word: w,
    })
}

fn prufer(p: u64, depth: u32) -> impl Strategy<Value = PruferElement> {
    (0..p.pow(depth)).prop_map(move |a| PruferElement::new(p, a, depth).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spherical_algebra_axioms(
        p in spherical_params(),
        x in element((0u32..=4).prop_map(SphericalIndex)),
        y in element((0u32..=4).prop_map(SphericalIndex)),
        z in element((0u32..=4).prop_map(SphericalIndex)),
    ) {
        check_axioms(&Spherical::new(p), &x, &y, &z)?;
    }

    #[test]
    fn spherical_table_shape(p in spherical_params(), n in 0u32..=6, m in 0u32..=6) {
        let (a, b) = (SphericalIndex(n), SphericalIndex(m));
        let prod = spherical::multiply_closed(a, b, &p);
        prop_assert_eq!(&prod, &spherical::multiply_closed(b, a, &p));
        prop_assert_eq!(&prod, &spherical::multiply_recursive(a, b, &p));
        prop_assert_eq!(prod.coeff(&SphericalIndex(n + m)), ratio(1, 1));
        prop_assert!(prod.support().all(|k| k.0 >= n.abs_diff(m) && k.0 <= n + m));
        check_constants(&Spherical::new(p), &a, &b)?;
    }

    #[test]
    fn spherical_polynomials(p in spherical_params(), x in element((0u32..=6).prop_map(SphericalIndex))) {
        let poly = spherical::to_polynomial(&x, &p);
        prop_assert_eq!(spherical::from_polynomial(&poly, &p), x.clone());
        let top = x.support().map(|k| k.0 as usize).max();
        prop_assert_eq!(poly.len(), top.map_or(0, |t| t + 1));
    }

    #[test]
    fn iwahori_algebra_axioms(
        (qs, qt, with_i) in prop_oneof![Just((2u64, 2u64, true)), Just((3, 3, true)), Just((2, 3, false)), Just((3, 2, false))],
        x in element(extended(3, true)),
        y in element(extended(3, true)),
        z in element(extended(3, true)),
    ) {
        let strip = |e: HeckeElement<ExtendedIndex>| -> HeckeElement<ExtendedIndex> {
            if with_i { e } else { e.map_indices(|i| ExtendedIndex::plain(i.word)) }
        };
        let p = Iwahori::new(IwahoriParams::new(qs, qt).unwrap());
        check_axioms(&p, &strip(x), &strip(y), &strip(z))?;
    }

    #[test]
    fn iwahori_closed_form(qs in 2u64..=4, qt in 2u64..=4, w in word(6), w2 in word(6)) {
        let p = IwahoriParams::new(qs, qt).unwrap();
        let gen = iwahori::multiply_words(&w, &w2, &p);
        prop_assert_eq!(&iwahori::multiply_closed(&w, &w2, &p), &gen);
        prop_assert_eq!(&iwahori::multiply_words_right(&w, &w2, &p), &gen);
        check_constants(&Iwahori::new(p), &ExtendedIndex::plain(w), &ExtendedIndex::plain(w2))?;
    }

    #[test]
    fn iwahori_twisted_tensor(q in 2u64..=4, a in extended(4, true), b in extended(4, true)) {
        // (i^e ⊗ w)(i^f ⊗ w') = i^{e+f} ⊗ bar^f(w) w'
        let p = IwahoriParams::new(q, q).unwrap();
        let left = if b.iflag { a.word.bar() } else { a.word };
        let flag = a.iflag ^ b.iflag;
        let expect = iwahori::multiply_words(&left, &b.word, &p)
            .map_indices(|i| ExtendedIndex { iflag: flag, word: i.word });
        prop_assert_eq!(iwahori::multiply(&a, &b, &p).unwrap(), expect);
    }

    #[test]
    fn iwahori_factorization(qs in 2u64..=4, qt in 2u64..=4, w in word(6)) {
        let p = IwahoriParams::new(qs, qt).unwrap();
        let prov = Iwahori::new(p);
        let mut acc = prov.one();
        for l in w.letters() {
            acc = acc.multiply(&HeckeElement::basis(ExtendedIndex::generator(l)), &prov);
        }
        prop_assert_eq!(acc, HeckeElement::basis(ExtendedIndex::plain(w)));
        let r: num_bigint::BigInt = w.letters().map(|l| num_bigint::BigInt::from(p.q(l))).product();
        prop_assert_eq!(iwahori::r_value(&ExtendedIndex::plain(w), &p), r);
    }

    #[test]
    fn affine_algebra_axioms(
        q in 2u64..=4,
        x in element((0u32..=3).prop_map(MBasisIndex)),
        y in element((0u32..=3).prop_map(MBasisIndex)),
        z in element((0u32..=3).prop_map(MBasisIndex)),
    ) {
        let p = AffineEnd::new(q).unwrap();
        check_axioms(&p, &x, &y, &z)?;
        prop_assert_eq!(x.multiply(&y, &p), y.multiply(&x, &p));
    }

    #[test]
    fn toeplitz_algebra_axioms(
        q in 2u64..=4,
        x in element((0u32..=3, 0u32..=3).prop_map(|(a, b)| Monomial::new(a, b))),
        y in element((0u32..=3, 0u32..=3).prop_map(|(a, b)| Monomial::new(a, b))),
        z in element((0u32..=3, 0u32..=3).prop_map(|(a, b)| Monomial::new(a, b))),
    ) {
        check_axioms(&Toeplitz::new(q).unwrap(), &x, &y, &z)?;
        let nx = ToeplitzNF::new(q, x.clone()).unwrap();
        let ny = ToeplitzNF::new(q, y.clone()).unwrap();
        prop_assert_eq!(nf_star(&nf_multiply(&nx, &ny).unwrap()), nf_multiply(&nf_star(&ny), &nf_star(&nx)).unwrap());
    }

    #[test]
    fn projection_lattice(q in 2u64..=4, n in 0u32..=6, m in 0u32..=6) {
        let prod = nf_multiply(&p_projection(n, q), &p_projection(m, q)).unwrap();
        prop_assert_eq!(prod, p_projection(n.max(m), q));
        let qq = nf_multiply(&q_projection(n, q), &q_projection(m, q)).unwrap();
        if n == m {
            prop_assert_eq!(qq, q_projection(n, q));
        } else {
            prop_assert!(qq.is_zero());
        }
    }

    #[test]
    fn m_table_constants(q in 2u64..=5, m in 0u32..=6, n in 0u32..=6) {
        let p = AffineEnd::new(q).unwrap();
        check_constants(&p, &MBasisIndex(m), &MBasisIndex(n))?;
        prop_assert_eq!(m_multiply(MBasisIndex(m), MBasisIndex(n), q), m_multiply(MBasisIndex(n), MBasisIndex(m), q));
    }

    #[test]
    fn sl2_algebra(
        p in prop_oneof![Just(3u64), Just(5), Just(7)],
        seeds in proptest::collection::vec((0u64..343, 0u32..=3), 3),
    ) {
        let h = Sl2Hecke::new(p).unwrap();
        let cosets: Vec<OrbitCoset> = seeds
            .iter()
            .map(|&(a, d)| OrbitCoset::of(&PruferElement::new(p, a, d).unwrap()))
            .collect();
        let [x, y, z] = [0, 1, 2].map(|i| HeckeElement::basis(cosets[i].clone()));
        check_axioms(&h, &x, &y, &z)?;
        prop_assert_eq!(x.multiply(&y, &h), y.multiply(&x, &h));
        check_constants(&h, &cosets[0], &cosets[1])?;
    }

    #[test]
    fn nu_respects_star(p in prop_oneof![Just(2u64), Just(3), Just(5), Just(7)], u in 0u64..343, d in 0u32..=3) {
        let u = PruferElement::new(p, u, d).unwrap();
        let negated = sl2::nu(&u).map_indices(|v| v.neg());
        prop_assert_eq!(sl2::nu(&u.neg()), negated);
    }

    #[test]
    fn prufer_group_law(x in prufer(5, 3), y in prufer(5, 2)) {
        let p = 5;
        let s = sl2::prufer_add(&x, &y).unwrap();
        prop_assert_eq!(sl2::prufer_add(&s, &y.neg()).unwrap(), x);
        prop_assert_eq!(s, sl2::prufer_add(&y, &x).unwrap());
        prop_assert_eq!(PruferElement::parse(&s.to_string(), p).unwrap(), s);
    }

    #[test]
    fn snf_postconditions(rows in 0usize..=6, cols in 0usize..=6, seed in proptest::collection::vec(-9i64..=9, 36)) {
        let data = seed[..rows * cols].iter().map(|&x| x.into()).collect();
        let m = IntegerMatrix::new(rows, cols, data).unwrap();
        let snf = smith_normal_form(&m);
        prop_assert_eq!(snf.u.mul(&m).unwrap().mul(&snf.v).unwrap(), snf.d.clone());
        prop_assert!(snf.d.is_diagonal());
        prop_assert_eq!(snf.rank() + kernel_rank(&m), cols);
        let c = cokernel(&m);
        prop_assert_eq!(c.free_rank + snf.rank(), rows);
        for w in c.invariant_factors.windows(2) {
            prop_assert!((&w[1] % &w[0]) == num_bigint::BigInt::from(0));
        }
    }

    #[test]
    fn limit_ignores_identity_levels(
        widths in proptest::collection::vec(1usize..=3, 2..=4),
        entries in proptest::collection::vec(0i64..=2, 64),
        at in 0usize..3,
    ) {
        let mut it = entries.into_iter().cycle();
        let maps: Vec<IntegerMatrix> = widths
            .windows(2)
            .map(|w| {
                let rows: Vec<Vec<i64>> = (0..w[1]).map(|_| (0..w[0]).map(|_| it.next().unwrap()).collect()).collect();
                IntegerMatrix::from_rows(&rows).unwrap()
            })
            .collect();
        let d = BratteliDiagram::new(widths.iter().map(|&n| vec![1; n]).collect(), maps).unwrap();
        let at = at % (widths.len() - 1);
        let k = widths.len() - 1;
        let base = truncated_limit(&d, k).unwrap();
        let padded = truncated_limit(&d.with_identity_level(at), k + 1).unwrap();
        prop_assert_eq!(&base.last().composed, &padded.last().composed);
        prop_assert_eq!(&base.last().cokernel, &padded.last().cokernel);
        prop_assert_eq!(base.stabilized, padded.stabilized);
    }

    #[test]
    fn ball_distance_symmetric(q0 in 2u64..=3, q1 in 2u64..=3, a in 0u32..200, b in 0u32..200) {
        let ball = TreeBall::build(q0, q1, 4).unwrap();
        let n = ball.num_vertices() as u32;
        let (u, v) = (hecketree::tree::Vertex(a % n), hecketree::tree::Vertex(b % n));
        prop_assert_eq!(ball.distance(u, v), ball.distance(v, u));
        prop_assert_eq!(ball.distance(u, v) == 0, u == v);
    }

    #[test]
    fn coefficient_text_round_trip(c in coefficient()) {
        prop_assert_eq!(parse_coefficient(&format_coefficient(&c)).unwrap(), c);
    }

    #[test]
    fn iwahori_label_round_trip(x in extended(8, true)) {
        prop_assert_eq!(labels::parse_iwahori(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn record_round_trip(x in element((0u32..=3, 0u32..=3).prop_map(|(a, b)| Monomial::new(a, b)))) {
        let r = OutputRecord::new(hecketree::Family::AffineEnd, "[s]^1".into(), "1".into(), &x, |m| m.to_string());
        prop_assert_eq!(OutputRecord::from_json(&r.to_json()).unwrap(), r.clone());
        prop_assert_eq!(r.element(labels::parse_monomial).unwrap(), x);
    }
}
