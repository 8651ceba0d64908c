//! Structure constants from the closed forms against geometric counts.

use hecketree::coeff::from_int;
use hecketree::iwahori::{self, ExtendedIndex, IwahoriParams};
use hecketree::spherical::{self, SphericalIndex, SphericalParams};
use hecketree::tree::{EdgeOracle, TreeBall};
use hecketree::HeckeElement;

fn spherical_from_ball(
    ball: &TreeBall,
    n: u32,
    m: u32,
    p: &SphericalParams,
) -> HeckeElement<SphericalIndex> {
    let step = p.step();
    (0..=n + m)
        .map(|k| {
            let c = ball
                .spherical_constant(n * step, m * step, k * step)
                .unwrap();
            (SphericalIndex(k), from_int(c))
        })
        .collect()
}

#[test]
fn spherical_homogeneous_matches_ball() {
    for q in [2, 3] {
        let p = SphericalParams::homogeneous(q).unwrap();
        let ball = TreeBall::build(q, q, 8).unwrap();
        for n in 0..=4 {
            for m in n..=4 {
                let expect = spherical_from_ball(&ball, n, m, &p);
                let got = spherical::multiply_closed(SphericalIndex(n), SphericalIndex(m), &p);
                assert_eq!(got, expect, "q={q} {n} {m}");
            }
        }
    }
}

#[test]
fn spherical_two_orbit_matches_ball() {
    for (q0, q1) in [(2, 3), (3, 2), (2, 2)] {
        let p = SphericalParams::two_orbit(q0, q1).unwrap();
        let ball = TreeBall::build(q0, q1, 10).unwrap();
        for n in 0..=2 {
            for m in 0..=3 {
                let expect = spherical_from_ball(&ball, n, m, &p);
                let got = spherical::multiply_closed(SphericalIndex(n), SphericalIndex(m), &p);
                assert_eq!(got, expect, "({q0},{q1}) {n} {m}");
            }
        }
    }
}

fn iwahori_from_ball(
    oracle: &EdgeOracle,
    a: &ExtendedIndex,
    b: &ExtendedIndex,
    targets: &[ExtendedIndex],
) -> HeckeElement<ExtendedIndex> {
    targets
        .iter()
        .map(|u| (*u, from_int(oracle.iwahori_constant(a, b, u).unwrap())))
        .collect()
}

#[test]
fn iwahori_matches_ball() {
    for (qs, qt, extended) in [(2, 2, true), (2, 3, false), (3, 2, false)] {
        let p = IwahoriParams::new(qs, qt).unwrap();
        let ball = TreeBall::build(qs, qt, 7).unwrap();
        let oracle = EdgeOracle::new(&ball, extended).unwrap();
        let words = ExtendedIndex::all_up_to(3, extended);
        let targets = ExtendedIndex::all_up_to(6, extended);
        for a in &words {
            for b in &words {
                let expect = iwahori_from_ball(&oracle, a, b, &targets);
                let got = iwahori::multiply(a, b, &p).unwrap();
                assert_eq!(got, expect, "({qs},{qt}) {a}·{b}");
                if !a.iflag && !b.iflag {
                    let closed = iwahori::multiply_closed(&a.word, &b.word, &p);
                    assert_eq!(closed, expect, "closed ({qs},{qt}) {a}·{b}");
                }
            }
        }
    }
}

#[test]
fn affine_matches_horocycles() {
    use hecketree::affine::{m_multiply, MBasisIndex};
    use hecketree::tree::HorocycleOracle;
    for q in [2, 3] {
        let ball = TreeBall::build(q, q, 8).unwrap();
        let oracle = HorocycleOracle::new(&ball).unwrap();
        for m in 0..=4 {
            for n in 0..=4 {
                let expect: HeckeElement<MBasisIndex> = (0..=4)
                    .map(|k| {
                        (
                            MBasisIndex(k),
                            from_int(oracle.horocycle_constant(m, n, k).unwrap()),
                        )
                    })
                    .collect();
                assert_eq!(
                    m_multiply(MBasisIndex(m), MBasisIndex(n), q),
                    expect,
                    "q={q} {m} {n}"
                );
            }
        }
    }
}
