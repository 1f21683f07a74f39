use ntn_uvmap::cli::{preset, ParameterSet, Scenario};
use ntn_uvmap::{adjacent_beam_spacing, beam_radius, build_layout, frf_color, hex_grid, Error, Frf, HexIndex};
use proptest::prelude::*;

proptest! {
    #[test]
    fn spacing_is_sqrt3_times_radius(theta in 1e-6f64..60.0) {
        let d = beam_radius(theta).unwrap();
        prop_assert_eq!(adjacent_beam_spacing(theta).unwrap(), 1.732_050_807_568_877_2 * d);
        prop_assert!(d > 0.0 && d < 1.0);
    }

    #[test]
    fn ring_of_grid_members_is_bounded(n in 0u32..12) {
        for h in hex_grid(n) {
            prop_assert!(h.ring() <= n);
        }
    }

    #[test]
    fn reuse_three_separates_neighbours(q in -50i32..50, r in -50i32..50) {
        let h = HexIndex::new(q, r);
        for n in h.neighbors() {
            prop_assert_ne!(frf_color(h, Frf::Three), frf_color(n, Frf::Three));
        }
    }
}

#[test]
fn grid_is_exactly_the_hex_ball() {
    // brute force: every (q, r) in a box whose ring is <= n
    for n in 0..=10i32 {
        let mut expected: Vec<HexIndex> = (-n..=n)
            .flat_map(|q| (-n..=n).map(move |r| HexIndex::new(q, r)))
            .filter(|h| h.ring() <= n as u32)
            .collect();
        let mut got = hex_grid(n as u32);
        expected.sort();
        got.sort();
        assert_eq!(got, expected);
    }
}

#[test]
fn all_presets_build_valid_layouts() {
    for set in ParameterSet::ALL {
        for scenario in Scenario::ALL {
            let mut cfg = preset(set, scenario);
            // the widest beam (set-2 LEO S-band, ABS 0.1334) reaches past the horizon with 4 rings
            if (set, scenario) == (ParameterSet::Set2, Scenario::LeoS) {
                assert!(matches!(build_layout(&cfg), Err(Error::BeyondHorizon { .. })));
                cfg.rings = 3;
            }
            let layout = build_layout(&cfg).unwrap();
            let n = cfg.rings as usize;
            assert_eq!(layout.len(), 1 + 3 * n * (n + 1));
            assert_eq!(layout.statistics_beams().count(), 19);
            for beam in &layout.beams {
                assert!(beam.center_uv.norm() <= 1.0);
                assert!(beam.vertices_uv.iter().all(|v| v.norm() <= cfg.satellite().horizon_limit()));
            }
        }
    }
}

#[test]
fn reuse_three_holds_on_every_layout_up_to_six_rings() {
    let mut cfg = preset(ParameterSet::Set1, Scenario::LeoS);
    cfg.frf = Frf::Three;
    for rings in 0..=6 {
        cfg.rings = rings;
        let layout = build_layout(&cfg).unwrap();
        for (a, b) in layout.adjacent_pairs() {
            assert_ne!(layout.beams[a].color, layout.beams[b].color);
        }
        assert!(layout.beams.iter().all(|b| b.color < 3));
    }
}
