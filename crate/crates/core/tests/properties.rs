mod common;

use common::{int, ratio, RawTable};
use num_rational::{BigRational, Ratio};
use proptest::prelude::*;

use subdisc::analysis::{
    auc_exact, chi_square, convex_hull, convex_hull_roc, distribution_series, normalize, BinSpec,
    ContingencyTable, HullPoint,
};
use subdisc::bitset::BitSet;
use subdisc::discovery::{
    quality_qg, quality_weighted_qg, rss_select, EqualQualityLine, Rule, WeightVector,
};
use subdisc::features::{coverage_of, dominates};
use subdisc::{build_feature_set, CoverageStats, FeatureOptions};

fn stats_from(n: usize, pos: usize, covered: &[bool]) -> CoverageStats {
    let set = BitSet::from_ids(n, (0..n).filter(|&i| covered[i]));
    let positives = BitSet::from_ids(n, 0..pos);
    let tp_set = set.intersection(&positives);
    let fp_set = set.difference(&positives);
    CoverageStats {
        tp: tp_set.count(),
        fp: fp_set.count(),
        tp_set,
        fp_set,
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn point_set() -> impl Strategy<Value = (i64, i64, Vec<(i64, i64)>)> {
    (1i64..30, 1i64..30).prop_flat_map(|(pos, neg)| {
        (
            Just(pos),
            Just(neg),
            prop::collection::vec((0..=neg, 0..=pos), 0..25),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn weighted_qg_with_unit_weights_is_qg(n in 1usize..60, pos_frac in 0.1f64..0.9, bits in prop::collection::vec(any::<bool>(), 60), g in 0.11f64..100.0) {
        let pos = ((n as f64 * pos_frac) as usize).max(1).min(n);
        let s = stats_from(n, pos, &bits[..n]);
        let w = WeightVector::from_positives(&BitSet::from_ids(n, 0..pos));
        prop_assert_eq!(quality_weighted_qg(&s, g, &w), quality_qg(&s, g));
        let exact_g = BigRational::from_float(g).unwrap();
        let exact = w.exact_weight_sum(&s.tp_set) / (int(s.fp) + &exact_g);
        prop_assert_eq!(exact, int(s.tp) / (int(s.fp) + exact_g));
    }

    #[test]
    fn equal_quality_intercepts(tp in 0usize..500, fp in 0usize..500, g_num in 1i64..2000, g_den in 1i64..20) {
        let g = ratio(g_num, g_den);
        let line = EqualQualityLine::new(tp, fp, &g);
        let on_line = |x: &BigRational, y: &BigRational| *y == int(tp) * (x + &g) / (int(fp) + &g);
        prop_assert!(on_line(&BigRational::from_integer(0.into()), &line.tp_intercept()));
        prop_assert!(on_line(&line.fp_intercept(), &BigRational::from_integer(0.into())));
        prop_assert_eq!(line.tp_at(&int(fp)), int(tp));
        prop_assert_eq!(line.tp_intercept(), int(tp) * &g / (int(fp) + &g));
    }

    #[test]
    fn qg_monotone(tp in 0usize..100, fp in 0usize..100, g in 0.11f64..100.0, k in 1usize..10) {
        let n = 2000;
        let mk = |tp: usize, fp: usize| CoverageStats {
            tp, fp,
            tp_set: BitSet::from_ids(n, 0..tp),
            fp_set: BitSet::from_ids(n, 1000..1000 + fp),
        };
        prop_assert!(quality_qg(&mk(tp + 1, fp), g) > quality_qg(&mk(tp, fp), g));
        if tp > 0 {
            prop_assert!(quality_qg(&mk(tp, fp + 1), g) < quality_qg(&mk(tp, fp), g));
        }
        // scaling g with the counts preserves the ratio
        let scaled = quality_qg(&mk(tp * k, fp * k), g * k as f64);
        prop_assert!((scaled - quality_qg(&mk(tp, fp), g)).abs() <= 1e-9 * scaled.abs().max(1.0));
    }

    #[test]
    fn rss_counters_count_covering_rules(seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(4..30);
        let pos = rng.gen_range(1..=n);
        let positives = BitSet::from_ids(n, 0..pos);
        let rules: Vec<Rule> = (0..rng.gen_range(1..12)).map(|i| {
            let tp_set = BitSet::from_ids(n, (0..pos).filter(|_| rng.gen_bool(0.5)));
            Rule {
                feature_ids: vec![i],
                conjunction: vec![format!("r{i}")],
                stats: CoverageStats { tp: tp_set.count(), fp: 0, tp_set, fp_set: BitSet::new(n) },
                quality: rng.gen_range(0..4) as f64,
                significance: None,
            }
        }).collect();
        let k = rng.gen_range(1..=rules.len());
        let steps = rss_select(&rules, &positives, k).unwrap();
        for (i, step) in steps.iter().enumerate() {
            for e in 0..pos {
                let covering = steps[..=i].iter().filter(|s| rules[s.index].stats.tp_set.contains(e)).count();
                prop_assert_eq!(step.counters.counter(e), Some(1 + covering as u32));
            }
        }
    }

    #[test]
    fn chi_square_symmetries(a in 1u64..50, b in 1u64..50, c in 1u64..50, d in 1u64..50, e in 0u64..50, f in 0u64..50) {
        let t = |rows: Vec<Vec<u64>>| chi_square(&ContingencyTable::from_counts(rows)).unwrap().exact;
        let base = t(vec![vec![a, b], vec![c, d], vec![e + 1, f + 1]]);
        prop_assert_eq!(&base, &t(vec![vec![c, d], vec![e + 1, f + 1], vec![a, b]]));
        prop_assert_eq!(&base, &t(vec![vec![b, a], vec![d, c], vec![f + 1, e + 1]]));
        prop_assert_eq!(t(vec![vec![a, b], vec![c, d]]), t(vec![vec![c, d], vec![a, b]]));
    }

    #[test]
    fn hull_is_convex_and_normalizes((pos, neg, pts) in point_set()) {
        let points: Vec<HullPoint<i64>> = pts.iter().enumerate().map(|(i, &(fp, tp))| HullPoint::new(fp, tp, Some(i))).collect();
        let hull = convex_hull(&points, pos as usize, neg as usize);
        prop_assert_eq!((hull[0].fp, hull[0].tp), (0, 0));
        prop_assert_eq!((hull.last().unwrap().fp, hull.last().unwrap().tp), (neg, pos));
        for w in hull.windows(2) {
            prop_assert!(w[0].fp <= w[1].fp);
        }
        for w in hull.windows(3) {
            prop_assert!(cross((w[0].fp, w[0].tp), (w[1].fp, w[1].tp), (w[2].fp, w[2].tp)) < 0);
        }
        // interior vertices lie strictly above the chance diagonal
        for v in &hull[1..hull.len() - 1] {
            prop_assert!(v.tp * neg > v.fp * pos);
        }
        // no input point lies above the hull
        for &(fp, tp) in &pts {
            for w in hull.windows(2) {
                if w[0].fp <= fp && fp <= w[1].fp {
                    prop_assert!(cross((w[0].fp, w[0].tp), (w[1].fp, w[1].tp), (fp, tp)) <= 0);
                }
            }
        }
        let roc = convex_hull_roc(&normalize(&points, pos as usize, neg as usize));
        prop_assert_eq!(normalize(&hull, pos as usize, neg as usize), roc);
    }

    #[test]
    fn dominating_hull_has_larger_auc((pos, neg, pts) in point_set(), extra in prop::collection::vec((0i64..30, 0i64..30), 1..5)) {
        let base: Vec<HullPoint<i64>> = pts.iter().map(|&(fp, tp)| HullPoint::new(fp, tp, None)).collect();
        let mut more = base.clone();
        more.extend(extra.iter().map(|&(fp, tp)| HullPoint::new(fp.min(neg), tp.min(pos), None)));
        let a = auc_exact(&normalize(&convex_hull(&base, pos as usize, neg as usize), pos as usize, neg as usize));
        let b = auc_exact(&normalize(&convex_hull(&more, pos as usize, neg as usize), pos as usize, neg as usize));
        prop_assert!(b >= a);
        prop_assert!(a >= Ratio::new(1, 2) && a <= Ratio::from_integer(1));
    }

    #[test]
    fn conjunction_coverage_is_monotone(seed in 0u64..500) {
        let table = RawTable::random(seed, 40, 6);
        let d = table.dataset();
        let fs = build_feature_set(&d, &FeatureOptions::default()).unwrap();
        if fs.len() >= 2 {
            let one = coverage_of(&[&fs[0]], &d);
            let two = coverage_of(&[&fs[0], &fs[fs.len() - 1]], &d);
            prop_assert!(two.tp_set.is_subset(&one.tp_set));
            prop_assert!(two.fp_set.is_subset(&one.fp_set));
            prop_assert_eq!(coverage_of(&[&fs[0], &fs[0]], &d), one.clone());
            prop_assert!(dominates(&one, &one));
        }
    }

    #[test]
    fn distribution_series_conserve_totals(seed in 0u64..500, width in 1usize..25) {
        let table = RawTable::random(seed, 40, 6);
        let d = table.dataset();
        let fs = build_feature_set(&d, &FeatureOptions::default()).unwrap();
        let rules: Vec<Rule> = fs.iter().take(3).enumerate().map(|(i, f)| {
            Rule::new(vec![i], &fs, coverage_of(&[f], &d), 0.0)
        }).collect();
        let refs: Vec<(usize, &Rule)> = rules.iter().enumerate().collect();
        for a in 0..d.attributes().len() {
            for spec in [BinSpec::Default, BinSpec::EqualWidth(width), BinSpec::PerValue] {
                let Ok(series) = distribution_series(&d, a, &refs, spec, true) else { continue };
                prop_assert_eq!(series[0].total(), d.pos() as u64);
                prop_assert_eq!(series[1].total(), d.neg() as u64);
                for (k, r) in rules.iter().enumerate() {
                    prop_assert_eq!(series[2 + k].total(), r.stats.tp as u64);
                    prop_assert_eq!(series[2 + rules.len() + k].total(), r.stats.fp as u64);
                }
            }
        }
    }
}
