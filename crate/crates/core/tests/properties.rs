mod common;

use logchar::algebra::{qi, Scalar};
use logchar::cdvf::{newton_polygon, DiffOperator, Gauge};
use logchar::cycles::{cycle_equal, kummer_pullback};
use logchar::euler::{
    chi_curve, chi_ep, chi_surface_kato, default_components, derham_oracle_curve, kashiwara_dubson_charts,
    rows_for_geometry, CurveGeometry, GeometryData, Puncture,
};
use logchar::goodmodel::zcar_prime;
use logchar::LaurentPolynomial;
use proptest::prelude::*;

use common::*;

fn laurent(n: usize, max_terms: usize, lo: i64, hi: i64) -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::vec((-5i64..=5, prop::collection::vec(lo..=hi, n)), 0..=max_terms).prop_map(move |t| {
        let mut p = LaurentPolynomial::zero(n);
        for (c, e) in t {
            p.add_term(Scalar::int(c), e);
        }
        p
    })
}

fn seeded_case() -> impl Strategy<Value = MonoCase> {
    any::<u64>().prop_map(|s| monomial_suite(13, s).pop().unwrap())
}

fn operator(gauge: Gauge) -> impl Strategy<Value = DiffOperator> {
    any::<u64>().prop_map(move |s| random_operator(&mut rng(s), gauge, 3, 4))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn euler_derivation_obeys_leibniz(a in laurent(2, 4, -3, 3), b in laurent(2, 4, -3, 3), j in 0usize..2) {
        let lhs = (a.clone() * b.clone()).euler(j);
        let rhs = a.euler(j) * b.clone() + a * b.euler(j);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inflation_is_multiplicative(a in laurent(2, 4, -3, 3), b in laurent(2, 4, -3, 3), h in 1i64..4) {
        let hv = [h, 1];
        prop_assert_eq!((a.clone() * b.clone()).inflate(&hv), a.inflate(&hv) * b.inflate(&hv));
    }

    #[test]
    fn curve_formulas_agree(genus in 0u32..3, irr in prop::collection::vec(prop::collection::vec(0i64..6, 1..=3), 1..4)) {
        let d = irr.iter().map(|v| v.len()).max().unwrap();
        let g = CurveGeometry {
            genus,
            punctures: irr
                .iter()
                .enumerate()
                .map(|(i, v)| Puncture { name: format!("p{i}"), irr: v.iter().map(|&b| qi(b)).collect() })
                .collect(),
        };
        let mut rows = vec![vec![qi(0); g.punctures.len()]; d];
        for (p, v) in irr.iter().enumerate() {
            for (i, &b) in v.iter().enumerate() {
                rows[i][p] = qi(b);
            }
        }
        let ep = chi_ep(&rows, &GeometryData::Curve(g.clone()), None).unwrap();
        prop_assert_eq!(ep, qi(chi_curve(d, &g).unwrap()));
    }

    #[test]
    fn de_rham_matches_curve_formula(phi in laurent(1, 3, -4, 4)) {
        let p = (-phi.min_exponent(0).unwrap_or(0)).max(0);
        let q = phi.max_exponent(0).unwrap_or(0).max(0);
        let g = CurveGeometry {
            genus: 0,
            punctures: vec![
                Puncture { name: "0".into(), irr: vec![qi(p)] },
                Puncture { name: "inf".into(), irr: vec![qi(q)] },
            ],
        };
        let window = (2 * p.max(q) + 5) as usize;
        prop_assert_eq!(derham_oracle_curve(&phi, window).unwrap().chi, chi_curve(1, &g).unwrap());
    }

    #[test]
    fn kashiwara_dubson_matches_surface_formula(seed in any::<u64>(), b in prop::collection::vec(0i64..4, 2), d in 1usize..3) {
        let (_, g) = random_surface(&mut rng(seed));
        prop_assume!(g.components.len() == 2);
        let case = MonoCase { log_vars: vec![true, true], b, u: lp(2, &[(1, &[0, 0]), (2, &[1, 1])]), d };
        let m = case.model();
        let z = zcar_prime(&m).unwrap();
        let geom = GeometryData::Surface(g.clone());
        let kd = kashiwara_dubson_charts(&[(&z, default_components(z.log_vars()))], &geom, None).unwrap();
        let rows = rows_for_geometry(&m.irregularity_divisor(), 2);
        prop_assert_eq!(kd, chi_surface_kato(&rows, &g).unwrap());
    }

    #[test]
    fn kummer_pullback_commutes_with_cycle(case in seeded_case(), h in 2i64..5) {
        let m = case.model();
        let hv = case.kummer_h(h);
        let lhs = kummer_pullback(&zcar_prime(&m).unwrap(), &hv).unwrap();
        let rhs = zcar_prime(&m.kummer_pullback(&hv).unwrap()).unwrap();
        prop_assert!(cycle_equal(&lhs, &rhs).unwrap());
    }

    #[test]
    fn finer_cover_keeps_irregularity(case in seeded_case(), h in 2i64..4) {
        let m = case.model();
        let finer = m.refine_cover(&case.kummer_h(h)).unwrap();
        prop_assert_eq!(finer.irregularity_divisor().rows(), m.irregularity_divisor().rows());
        // directions are written in the cover coordinates, multiplicities are not
        let (a, b) = (zcar_prime(&m).unwrap(), zcar_prime(&finer).unwrap());
        prop_assert_eq!(a.zero_section_mult(), b.zero_section_mult());
        for j in 0..case.n() {
            let along = |c: &logchar::cycles::LogCycle| {
                c.restrict_to_divisor(j).lines().map(|(_, m)| m.clone()).collect::<Vec<_>>()
            };
            prop_assert_eq!(along(&a), along(&b));
        }
    }

    #[test]
    fn irregularity_is_additive_under_composition(p in operator(Gauge::D), q in operator(Gauge::D)) {
        let pq = p.compose(&q).unwrap();
        let sum = newton_polygon(&p).unwrap().total_irregularity() + newton_polygon(&q).unwrap().total_irregularity();
        prop_assert_eq!(newton_polygon(&pq).unwrap().total_irregularity(), sum);
    }

    #[test]
    fn kummer_scales_irregularity(p in operator(Gauge::Theta), h in 2u64..4) {
        let base = newton_polygon(&p).unwrap().total_irregularity();
        let cover = newton_polygon(&p.kummer(h)).unwrap().total_irregularity();
        prop_assert_eq!(cover, base * qi(h as i64));
    }

    #[test]
    fn gauges_agree(p in operator(Gauge::D)) {
        let a = newton_polygon(&p).unwrap();
        let b = newton_polygon(&p.to_theta_gauge()).unwrap();
        prop_assert_eq!(a.total_irregularity(), b.total_irregularity());
    }
}
