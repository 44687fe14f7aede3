use polarscope::characterizer::{classify, dual_tangent_set, expected_profile, Verdict};
use polarscope::io::{read_point_set, write_point_set};
use polarscope::polar::construct;
use polarscope::{PolarKind, PolarSpec};

fn grid() -> Vec<PolarSpec> {
    let mut out = Vec::new();
    for kind in PolarKind::ALL {
        for dim in 2..=5 {
            for q in [2, 3, 4, 5] {
                if let Ok(s) = PolarSpec::new(kind, dim, q) {
                    if s.space().is_ok_and(|sp| sp.num_points() <= 5000) {
                        out.push(s);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn files_round_trip() {
    for s in grid() {
        let (space, k) = construct(&s).unwrap();
        let (space2, k2) = read_point_set(&write_point_set(&space, &k)).unwrap();
        assert_eq!(space2.dim(), space.dim());
        assert_eq!(k2, k, "{s}");
    }
}

#[test]
fn constructed_spaces_classify_as_themselves() {
    for s in grid() {
        let (space, k) = construct(&s).unwrap();
        assert_eq!(k.len() as u128, s.size(), "{s}");
        let c = classify(&space, &k).unwrap_or_else(|e| panic!("{s}: {e}"));
        let failures: Vec<_> = c.report.failures().map(|e| e.check.clone()).collect();
        assert_eq!(c.verdict, Verdict::ClassicalPolar(s.kind), "{s}: {failures:?}");
    }
}

#[test]
fn duals_classify_as_the_same_kind() {
    // In even characteristic every tangent hyperplane of a parabolic quadric
    // passes through the nucleus, so the dual is degenerate.
    let odd_or_not_parabolic = |s: &PolarSpec| s.kind != PolarKind::Parabolic || s.q % 2 == 1;
    for s in grid().into_iter().filter(|s| s.dim >= 3 && odd_or_not_parabolic(s)) {
        let (space, k) = construct(&s).unwrap();
        let e = expected_profile(&s).unwrap();
        let dual = dual_tangent_set(&space, &k, e.tangent_size()).unwrap();
        assert_eq!(dual.len() as u64, e.tangent_count(), "{s}");
        let c = classify(&space, &dual).unwrap();
        let failures: Vec<_> = c.report.failures().map(|e| e.check.clone()).collect();
        assert_eq!(c.verdict, Verdict::ClassicalPolar(s.kind), "{s}: {failures:?}");
    }
}
