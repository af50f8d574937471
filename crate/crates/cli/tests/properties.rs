//! Property tests for the file formats.

use modmhd_cli::config::{parse_config, serialize};
use modmhd_cli::output::{diagnostics_csv, parse_diagnostics_csv};
use modmhd_cli::snapshot::{decode, encode};
use modmhd_core::analysis::DiagnosticsRecord;
use modmhd_core::dynamics::{Magnetic, SimState};
use modmhd_core::emcore::BackgroundPotential;
use modmhd_core::fieldkit::{GridSpec, ScalarField, VectorField};
use proptest::prelude::*;

fn field(g: GridSpec, seed: &[f64]) -> ScalarField {
    ScalarField::from_vec(g, (0..g.len()).map(|i| seed[i % seed.len()] * (1.0 + i as f64)).collect()).unwrap()
}

fn vfield(g: GridSpec, seed: &[f64]) -> VectorField {
    VectorField::from_components([field(g, seed), field(g, &seed[1..]), field(g, &seed[2..])])
}

proptest! {
    #[test]
    fn snapshot_round_trip_is_bitwise(
        dims in (4usize..7, 4usize..7, 4usize..7),
        lens in (0.1f64..10.0, 0.1f64..10.0, 0.1f64..10.0),
        t in 0.0f64..100.0,
        seed in prop::collection::vec(any::<f64>(), 4..8),
        m in prop::array::uniform9(-5.0f64..5.0),
        modified in any::<bool>(),
    ) {
        let g = GridSpec::new(dims.0, dims.1, dims.2, lens.0, lens.1, lens.2).unwrap();
        let magnetic = if modified {
            let mm = [[m[0], m[1], m[2]], [m[3], m[4], m[5]], [m[6], m[7], m[8]]];
            Magnetic::Potential { a: vfield(g, &seed), bg: BackgroundPotential::from_matrix(mm) }
        } else {
            Magnetic::Field { h: vfield(g, &seed), h0: [m[0], m[1], m[2]] }
        };
        let s = SimState { magnetic, v: vfield(g, &seed[1..]), rho: field(g, &seed), p: field(g, &seed[2..]), t };
        let bytes = encode(&s);
        let back = decode(&bytes).unwrap();
        prop_assert_eq!(encode(&back), bytes);
    }

    #[test]
    fn diagnostics_csv_round_trips_exactly(vals in prop::collection::vec(prop::array::uniform16(any::<f64>()), 0..5)) {
        let recs: Vec<DiagnosticsRecord> = vals.iter().map(|v| DiagnosticsRecord::from_values(*v)).collect();
        let back = parse_diagnostics_csv(&diagnostics_csv(&recs)).unwrap();
        prop_assert_eq!(back.len(), recs.len());
        for (a, b) in back.iter().zip(&recs) {
            let (va, vb) = (a.values(), b.values());
            for i in 0..16 {
                prop_assert!(va[i].to_bits() == vb[i].to_bits() || (va[i].is_nan() && vb[i].is_nan()));
            }
        }
    }

    #[test]
    fn config_round_trip(
        n in (4usize..64, 4usize..64, 4usize..64),
        courant in 0.01f64..1.0,
        c in 0.1f64..10.0,
        gamma in 1.01f64..3.0,
        scenario in 0usize..6,
        traditional in any::<bool>(),
        every_n in 0u32..5,
        amp in 0.0f64..1.0,
    ) {
        let name = ["uniform_rest", "alfven", "sound", "random_solenoidal", "orszag_tang", "manufactured"][scenario];
        let gauge = if every_n == 0 { "off".to_string() } else { format!("every_n:{every_n}") };
        let mut text = format!(
            "grid.nx = {}\ngrid.ny = {}\ngrid.nz = {}\nscenario.name = \"{name}\"\nnumerics.courant = {courant:?}\nphysics.c = {c:?}\nphysics.gamma = {gamma:?}\nformulation = \"{}\"\nnumerics.gauge_policy = \"{gauge}\"\n",
            n.0, n.1, n.2, if traditional { "traditional" } else { "modified" },
        );
        if name == "random_solenoidal" {
            text.push_str(&format!("scenario.amplitude = {amp:?}\n"));
        }
        let cfg = parse_config(&text).unwrap();
        prop_assert_eq!(cfg.courant, courant);
        prop_assert_eq!(parse_config(&serialize(&cfg)).unwrap(), cfg);
    }
}
