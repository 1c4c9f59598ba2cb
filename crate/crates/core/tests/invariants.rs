use proptest::prelude::*;
use std::sync::OnceLock;
use tetcensus::census::hexfloat::{from_hex, to_hex};
use tetcensus::census::homology::smith_diagonal;
use tetcensus::census::{compute_homology, histogram, truncated_homology};
use tetcensus::enumerate::{enumerate_candidates, EnumerationConfig};
use tetcensus::perm::S4;
use tetcensus::solver::solve_with_cusp_handoff;
use tetcensus::triangulation::{compute_boundary, iso_signature, pachner_neighbours, Triangulation};

fn pool() -> &'static [Triangulation] {
    static POOL: OnceLock<Vec<Triangulation>> = OnceLock::new();
    POOL.get_or_init(|| {
        [2, 3]
            .into_iter()
            .flat_map(|n| enumerate_candidates(&EnumerationConfig::new(n)).candidates)
            .map(|(_, t)| t)
            .collect()
    })
}

/// Follows `steps` through the move graph, capped at one extra tetrahedron.
fn walk(t: &Triangulation, steps: &[usize]) -> Triangulation {
    let cap = t.tet_count() + 1;
    let mut cur = t.clone();
    for &s in steps {
        let next: Vec<Triangulation> = pachner_neighbours(&cur).into_iter().filter(|u| u.tet_count() <= cap).collect();
        if next.is_empty() {
            break;
        }
        cur = next[s % next.len()].clone();
    }
    cur
}

fn relabel(t: &Triangulation, shift: usize, perms: &[usize]) -> Triangulation {
    let n = t.tet_count();
    let tet_map: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
    let vertex_maps: Vec<_> = (0..n).map(|i| S4[perms[i % perms.len()] % 24]).collect();
    t.relabel(&tet_map, &vertex_maps)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moves_keep_topology(i in 0usize..10_000, steps in prop::collection::vec(0usize..64, 1..4)) {
        let t = &pool()[i % pool().len()];
        let u = walk(t, &steps);
        prop_assert_eq!(compute_boundary(&u).genus_vector(), compute_boundary(t).genus_vector());
        prop_assert_eq!(compute_homology(&u), compute_homology(t));
        prop_assert_eq!(truncated_homology(&u), compute_homology(t));
    }

    #[test]
    fn moves_keep_volume(i in 0usize..10_000, step in 0usize..64) {
        let t = &pool()[i % pool().len()];
        let u = walk(t, &[step]);
        let cfg = Default::default();
        let (a, b) = (solve_with_cusp_handoff(t, &cfg), solve_with_cusp_handoff(&u, &cfg));
        if a.is_success() && b.is_success() && a.cusps() == b.cusps() {
            prop_assert!((a.volume() - b.volume()).abs() < 1e-8, "{} vs {}", a.volume(), b.volume());
        }
    }

    #[test]
    fn signature_ignores_labels(i in 0usize..10_000, shift in 0usize..8, perms in prop::collection::vec(0usize..24, 1..6)) {
        let t = &pool()[i % pool().len()];
        let u = relabel(t, shift, &perms);
        prop_assert_eq!(iso_signature(&u, false), iso_signature(t, false));
        let back = iso_signature(t, false).to_triangulation().unwrap();
        prop_assert_eq!(iso_signature(&back, false), iso_signature(t, false));
    }

    #[test]
    fn hex_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let back = from_hex(&to_hex(x)).unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }

    #[test]
    fn smith_factors_divide(rows in prop::collection::vec(prop::collection::vec(-6i128..7, 3), 3)) {
        let d = smith_diagonal(rows.clone(), 3);
        for w in d.windows(2) {
            prop_assert!(w[0] != 0 && w[1] % w[0] == 0, "{d:?}");
        }
        let m = &rows;
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if det != 0 {
            prop_assert_eq!(d.len(), 3);
            prop_assert_eq!(d.iter().map(|&x| x as i128).product::<i128>(), det.abs());
        } else {
            prop_assert!(d.len() < 3);
        }
    }

    #[test]
    fn histogram_accounts_for_everything(vols in prop::collection::vec(0.0f64..20.0, 0..60)) {
        let h = histogram(&vols);
        prop_assert_eq!(h.iter().map(|v| v.multiplicity).sum::<usize>(), vols.len());
        for w in h.windows(2) {
            prop_assert!(w[0].volume < w[1].volume);
        }
    }
}
