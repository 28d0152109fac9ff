//! Every number in a report comes straight from a library call.

use num_bigint::BigInt;
use num_rational::BigRational;
use reebcone_cli::{run, Command, Flags, Report, Settings};
use reebcone_core::{
    decompose_dual, delta, dual_cone, futaki_product, index_character, minimize_volume,
    CharacterOptions, MinimizeOptions, ReebVector,
};
use serde_json::Value;

const SPECS: [(&str, &str); 5] = [
    ("orthant2", include_str!("../specs/orthant2.json")),
    ("orthant3", include_str!("../specs/orthant3.json")),
    ("a1", include_str!("../specs/a1.json")),
    ("conifold", include_str!("../specs/conifold.json")),
    ("y21", include_str!("../specs/y21.json")),
];

fn q(s: &str) -> BigRational {
    match s.split_once('/') {
        Some((p, d)) => {
            BigRational::new(p.parse::<BigInt>().unwrap(), d.parse::<BigInt>().unwrap())
        }
        None => BigRational::from_integer(s.parse::<BigInt>().unwrap()),
    }
}

fn qs(v: &Value) -> Vec<BigRational> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| q(x.as_str().unwrap()))
        .collect()
}

fn fixture(text: &str) -> (reebcone_core::ToricCone, Vec<BigRational>, Vec<BigRational>) {
    let spec = reebcone_cli::parse_cone_spec(text).unwrap();
    let exact = |v: Vec<reebcone_cli::Number>| {
        v.into_iter()
            .map(|x| match x {
                reebcone_cli::Number::Exact(r) => r,
                reebcone_cli::Number::Real(_) => panic!("fixtures are exact"),
            })
            .collect::<Vec<_>>()
    };
    (
        dual_cone(&spec.rays, spec.dim).unwrap(),
        exact(spec.xi.unwrap()),
        exact(spec.eta.unwrap()),
    )
}

fn report(cmd: Command, text: &str, flags: &Flags) -> Report {
    let r = run(cmd, text, "fixture", flags, &Settings::default());
    assert!(r.error.is_none(), "{:?}", r.error);
    r
}

#[test]
fn delta_reports_match_library() {
    for (name, text) in SPECS {
        let (cone, xi, _) = fixture(text);
        let lib = delta(&cone, &ReebVector::new(&cone, xi).unwrap()).unwrap();
        let r = report(Command::Delta, text, &Flags::default());
        let d = &r.results.unwrap()["delta"];
        assert_eq!(q(d["delta"].as_str().unwrap()), lib.delta, "{name}");
        assert_eq!(qs(&d["bary_p"]), lib.bary_p, "{name}");
        assert_eq!(qs(&d["bary_q"]), lib.bary_q, "{name}");
        assert_eq!(qs(&d["gorenstein"]), lib.gorenstein, "{name}");
        assert_eq!(d["kss"], lib.kss, "{name}");
        assert_eq!(
            q(d["kss_residual"].as_str().unwrap()),
            lib.residual,
            "{name}"
        );
    }
}

#[test]
fn futaki_and_character_reports_match_library() {
    for (name, text) in SPECS {
        let (cone, xi, eta) = fixture(text);
        let pieces = decompose_dual(&cone, 1_000_000).unwrap();
        let reeb = ReebVector::new(&cone, xi).unwrap();
        let lib = futaki_product(&pieces, &reeb, &eta, CharacterOptions::default()).unwrap();
        let r = report(Command::Futaki, text, &Flags::default());
        let f = &r.results.unwrap()["futaki"];
        for (key, val) in [
            ("a0", &lib.a0),
            ("a1", &lib.a1),
            ("b0", &lib.b0),
            ("b1", &lib.b1),
            ("fut", &lib.fut),
        ] {
            assert_eq!(&q(f[key].as_str().unwrap()), val, "{name} {key}");
        }

        let flags = Flags {
            order: Some(3),
            ..Default::default()
        };
        let series = index_character(&pieces, &reeb, 3, CharacterOptions::default()).unwrap();
        let r = report(Command::Character, text, &flags);
        let coeffs: Vec<BigRational> = r.results.unwrap()["character"]["index"]["coefficients"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| q(c["value"].as_str().unwrap()))
            .collect();
        assert_eq!(coeffs, series.coeffs, "{name}");
    }
}

#[test]
fn minimize_reports_match_library() {
    for (name, text) in SPECS {
        let (cone, _, _) = fixture(text);
        let lib = minimize_volume(&cone, &MinimizeOptions::default()).unwrap();
        let r = report(Command::Minimize, text, &Flags::default());
        let m = &r.results.unwrap()["minimize"];
        let xi: Vec<f64> = m["xi_star"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_f64().unwrap())
            .collect();
        // the spec's ξ is the starting point, so compare against that run
        let start = MinimizeOptions {
            start: Some(
                fixture(text)
                    .1
                    .iter()
                    .map(reebcone_core::scalar::ratio_to_f64)
                    .collect(),
            ),
            ..Default::default()
        };
        let from_spec = minimize_volume(&cone, &start).unwrap();
        assert_eq!(xi, from_spec.xi, "{name}");
        assert_eq!(m["a0_star"].as_f64().unwrap(), from_spec.value, "{name}");
        assert!(
            (from_spec.value - lib.value).abs() <= 1e-12 * lib.value,
            "{name}"
        );
    }
}

#[test]
fn reports_round_trip_losslessly() {
    let commands = [
        (Command::Check, Flags::default()),
        (Command::Delta, Flags::default()),
        (Command::Futaki, Flags::default()),
        (
            Command::Character,
            Flags {
                order: Some(4),
                ..Default::default()
            },
        ),
        (
            Command::Minimize,
            Flags {
                probe_rational: Some(50),
                grid: Some(20),
                ..Default::default()
            },
        ),
        (
            Command::Oracle,
            Flags {
                m_max: Some(3),
                t: Some(vec![0.5]),
                ..Default::default()
            },
        ),
    ];
    for (_, text) in SPECS {
        for (cmd, flags) in &commands {
            let r = run(*cmd, text, "fixture", flags, &Settings::default());
            let json = r.to_json();
            let back = Report::from_json(&json).unwrap();
            assert_eq!(back, r);
            assert_eq!(back.to_json(), json);
        }
    }
}

#[test]
fn reports_independent_of_thread_pool() {
    let flags = Flags {
        grid: Some(40),
        probe_rational: Some(20),
        ..Default::default()
    };
    for (_, text) in SPECS {
        for cmd in [Command::Futaki, Command::Minimize, Command::Delta] {
            let f = if cmd == Command::Minimize {
                flags.clone()
            } else {
                Flags::default()
            };
            let base = run(cmd, text, "fixture", &f, &Settings::default()).to_json();
            for threads in [1, 3, 8] {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .unwrap();
                let again =
                    pool.install(|| run(cmd, text, "fixture", &f, &Settings::default()).to_json());
                assert_eq!(base, again);
            }
        }
    }
}

#[test]
fn boundary_coefficients_need_the_flag() {
    let text = r#"{"dim":2,"rays":[[1,0],[0,1]],"xi":[1,1],"boundary_coeffs":["1/2","0"]}"#;
    let r = run(
        Command::Delta,
        text,
        "b",
        &Flags::default(),
        &Settings::default(),
    );
    assert_eq!(r.error.unwrap().name, "ExperimentalDisabled");
    let flags = Flags {
        experimental: true,
        ..Default::default()
    };
    let r = run(Command::Delta, text, "b", &flags, &Settings::default());
    assert_eq!(
        r.results.unwrap()["delta"]["gorenstein"],
        serde_json::json!(["1/2", "1"])
    );
}

#[test]
fn float_inputs_switch_mode() {
    let text = r#"{"dim":2,"rays":[[1,0],[1,2]],"xi":[1.0, 0.5]}"#;
    let r = run(
        Command::Delta,
        text,
        "f",
        &Flags::default(),
        &Settings::default(),
    );
    assert_eq!(r.provenance.arithmetic, "binary64");
    let d = r.results.unwrap()["delta"]["delta"].as_f64().unwrap();
    assert!((d - 0.5).abs() < 1e-12);

    let flags = Flags {
        xi: Some(vec!["1".into(), "1/2".into()]),
        float: true,
        ..Default::default()
    };
    let r = run(
        Command::Delta,
        include_str!("../specs/a1.json"),
        "f",
        &flags,
        &Settings::default(),
    );
    assert_eq!(r.provenance.arithmetic, "binary64");
}
