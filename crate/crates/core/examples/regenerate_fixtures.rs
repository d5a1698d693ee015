//! Regenerates the repository fixtures from their recorded search
//! parameters. The discovery pipeline was: simulated annealing over 3AP-free
//! sets (ratio objective), a scan over shift-triple seeds for the E-set, and
//! random sign draws with greedy flips for the hexagon witness. All draws run
//! on the counter RNG, so this reproduces the committed files byte for byte
//! (except the discovery date).
//!
//!     cargo run --release --example regenerate_fixtures [-- <date>]

use vnlab_core::ap_groups::{classify_slop3, Slop3Letter};
use vnlab_core::combinatorics::*;
use vnlab_core::fixtures::*;

fn main() {
    let date = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "2026-08-08".to_string());
    let dir = fixture_dir();
    std::fs::create_dir_all(&dir).unwrap();

    // Three-copy E-set beating the 8x threshold. F was found by
    // `anneal_concentrated_set(200, 667, seed 1005, 600k steps)`; the seed by
    // `search_negav_seed`. The crossed-product trace is negative from N = 8
    // (measured: +2.18 at N = 4, -41.3 at N = 8).
    let d = 2001i64;
    let f = vec![
        6i64, 10, 15, 18, 19, 36, 42, 52, 60, 61, 63, 67, 75, 81, 88, 91, 93, 96, 100, 106, 136,
        138, 141, 142, 153, 154, 159, 162, 169, 187, 192, 198, 199,
    ];
    let fset = CyclicSet::new(d, f.iter().copied());
    assert!(fset.is_3ap_free());
    let seed = 10610u64;
    let sample = lemma_negav_e(&fset, d, seed);
    assert!(
        sample.good > 8 * sample.bad,
        "E-set fixture lost its margin"
    );
    Fixture::new(
        FixturePayload::NegavE {
            d,
            f,
            seed,
            good: sample.good,
            bad: sample.bad,
            negtrace_threshold_n: 8,
        },
        Provenance {
            seed,
            search_parameters:
                "annealed 3AP-free F in [1,200] (ratio objective, 600k steps x 6 restarts), seed scan over shift triples"
                    .into(),
            discovery_date: date.clone(),
        },
    )
    .save(&dir.join("negav_e.json"))
    .unwrap();
    println!(
        "negav_e.json: good={} bad={} rtm={}",
        sample.good,
        sample.bad,
        sample.restricted_third_moment()
    );

    // Sign vector with a negative hexagon sum. M values validated by the
    // truncation sweep (limit/M^8 stable to <= 0.105 rel change); M = 16 is
    // the largest truncation whose exercised frequencies stay clear of the
    // denominator-169 approximant of sqrt(2), keeping the N = 2e4 empirical
    // average within tolerance of the limit.
    let d = 25i64;
    let f = vec![1i64, 5, 7, 8, 10, 14, 16];
    let fset = CyclicSet::new(d, f.iter().copied());
    let (signs, x) = search_negative_x(&fset, d, 1, 500).expect("witness");
    Fixture::new(
        FixturePayload::SignVector {
            d,
            f,
            signs: format_signs(&signs),
            x,
            m_values: vec![125, 150, 200],
            m_empirical: 16,
        },
        Provenance {
            seed: 1,
            search_parameters: "random draws + greedy single flips, max_draws=500".into(),
            discovery_date: date.clone(),
        },
    )
    .save(&dir.join("sign_vector.json"))
    .unwrap();
    println!("sign_vector.json: X={x}");

    for r in [1i64, 2, 3] {
        let sols = classify_slop3(r);
        let tokens: Vec<Vec<String>> = sols
            .iter()
            .map(|t| t.iter().map(Slop3Letter::token).collect())
            .collect();
        Fixture::new(
            FixturePayload::Slop3Solutions {
                r,
                solutions: tokens,
            },
            Provenance {
                seed: 0,
                search_parameters: "exhaustive enumeration over 11^5 tuples".into(),
                discovery_date: date.clone(),
            },
        )
        .save(&dir.join(format!("slop3_r{r}.json")))
        .unwrap();
        println!("slop3_r{r}.json: {} solutions", sols.len());
    }
}
