use super::*;
use crate::combinatorics::VariantTag;
use crate::sampling::random_admissible_type;
use crate::spread_types::{build_optimal_type, build_variant_type, Shape};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn two_by_ones() -> VType {
    let mut ty = VType::general(2);
    ty.add(Shape::new(vec![1, 1]), 1u32).unwrap();
    ty
}

fn blocks_of(system: &SpreadSystem) -> Vec<Vec<Vec<usize>>> {
    system.spreads.iter().map(|s| s.blocks.clone()).collect()
}

/// Every integral arc assignment within the floor/ceiling bounds that meets
/// supplies and demands, by exhaustive enumeration.
fn brute_force_assignments(net: &StepNetwork) -> Vec<Vec<u64>> {
    let ranges: Vec<(u64, u64)> = net.arcs.iter().map(|a| (a.lower(), a.upper())).collect();
    let mut out = Vec::new();
    let mut cur: Vec<u64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let mut class_out = vec![0u64; net.classes.len()];
        let mut cell_in = vec![0u64; net.cells.len()];
        let mut skip_in = 0u64;
        for (arc, &x) in net.arcs.iter().zip(&cur) {
            class_out[arc.class] += x;
            match arc.target {
                ArcTarget::Cell(c) => cell_in[c] += x,
                ArcTarget::Skip => skip_in += x,
            }
        }
        let ok = class_out
            .iter()
            .zip(&net.classes)
            .all(|(o, c)| *o == c.members.len() as u64)
            && cell_in.iter().zip(&net.cells).all(|(i, c)| *i == c.demand)
            && skip_in == net.skip_demand;
        if ok {
            out.push(cur.clone());
        }
        // odometer
        let mut i = 0;
        loop {
            if i == cur.len() {
                return out;
            }
            if cur[i] < ranges[i].1 {
                cur[i] += 1;
                break;
            }
            cur[i] = ranges[i].0;
            i += 1;
        }
    }
}

#[test]
fn init_on_two_points() {
    let full = make_full(&two_by_ones()).unwrap();
    let state = init_realization(&full).unwrap();
    assert_eq!(state.groups().len(), 3);
    assert!(state
        .groups()
        .iter()
        .all(|g| g.blocks.iter().all(|b| b.members == 0)));
    assert!(check_tau_realization(&state).is_ok());
    assert_eq!(state.skip_count(), Some(1));
}

#[test]
fn init_rejects_non_full() {
    assert!(matches!(
        init_realization(&two_by_ones()),
        Err(Error::NotFull { .. })
    ));
    let mut bad = VType::general(2);
    bad.add(Shape::new(vec![0, 0]), 1u32).unwrap();
    assert!(matches!(
        init_realization(&bad),
        Err(Error::NotAdmissible { size: 0, .. })
    ));
}

#[test]
fn init_random_full_types() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for i in 0..20 {
        let n = 1 + i % 8;
        let ty = random_admissible_type(&mut rng, n, 4, 10);
        let state = init_realization(&make_full(&ty).unwrap()).unwrap();
        assert!(check_tau_realization(&state).is_ok());
        let total: u64 = state
            .groups()
            .iter()
            .flat_map(|g| &g.blocks)
            .map(|b| b.target as u64)
            .sum();
        assert_eq!(total, n as u64 * (1u64 << (n - 1)));
    }
}

#[test]
fn first_step_on_two_points_is_forced() {
    let full = make_full(&two_by_ones()).unwrap();
    let state = init_realization(&full).unwrap();
    // groups in order: requested {1,1}, fill {0}, fill {2}
    let net = StepNetwork::build(&state).unwrap();
    let all = brute_force_assignments(&net);
    assert_eq!(all.len(), 1);
    let next = advance(&state).unwrap();
    let g = next.groups();
    assert_eq!(g[0].blocks[0].members, 0b1);
    assert_eq!(g[0].blocks[1].members, 0);
    assert_eq!(g[1].blocks[0].members, 0);
    assert_eq!(g[2].blocks[0].members, 0b1);
    assert!(check_tau_realization(&next).is_ok());
}

#[test]
fn integral_values_are_forced() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let n = rng.gen_range(2..=6);
        let ty = random_admissible_type(&mut rng, n, 3, 8);
        let mut state = init_realization(&make_full(&ty).unwrap()).unwrap();
        while !state.is_complete() {
            let net = StepNetwork::build(&state).unwrap();
            let flows = net.solve_arc_flows().unwrap();
            for (arc, &g) in net.arcs.iter().zip(&flows) {
                if arc.value.num % arc.value.den == 0 {
                    assert_eq!(g as u128, arc.value.num / arc.value.den);
                }
                assert!(arc.lower() <= g && g <= arc.upper());
            }
            state = advance(&state).unwrap();
        }
    }
}

use rand::Rng;

#[test]
fn every_step_keeps_the_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut types: Vec<VType> = Vec::new();
    for n in 1..=10 {
        types.push(random_admissible_type(&mut rng, n, 4, 12));
        for v in 2..=n + 1 {
            types.push(build_optimal_type(n, v).unwrap());
        }
    }
    for ty in &types {
        let mut state = init_realization(&make_full(ty).unwrap()).unwrap();
        while !state.is_complete() {
            state = advance(&state).unwrap();
            assert!(
                check_tau_realization(&state).is_ok(),
                "N={} tau={}",
                state.n(),
                state.tau()
            );
        }
    }
}

#[test]
fn mutation_is_detected() {
    let ty = build_optimal_type(5, 3).unwrap();
    let mut state = init_realization(&make_full(&ty).unwrap()).unwrap();
    for _ in 0..3 {
        state = advance(&state).unwrap();
    }
    assert!(check_tau_realization(&state).is_ok());

    // move element 1 out of one block and into an empty one in another group
    let mut broken = state.clone();
    let (g, j) = broken
        .groups()
        .iter()
        .enumerate()
        .find_map(|(g, gr)| {
            gr.blocks
                .iter()
                .position(|b| b.members & 1 == 1)
                .map(|j| (g, j))
        })
        .unwrap();
    broken.groups_mut()[g].blocks[j].members &= !1;
    assert!(matches!(
        check_tau_realization(&broken),
        RealizationVerdict::CountMismatch { .. }
    ));

    let mut outside = state.clone();
    outside.groups_mut()[0].blocks[0].members |= 1 << 4;
    assert!(!check_tau_realization(&outside).is_ok());

    let mut dropped = state.clone();
    let last = dropped.groups().len() - 1;
    dropped.groups_mut()[last].blocks.pop();
    assert!(matches!(
        check_tau_realization(&dropped),
        RealizationVerdict::CountMismatch { .. }
    ));
}

#[test]
fn final_state_has_each_block_once() {
    let full = make_full(&build_optimal_type(6, 3).unwrap()).unwrap();
    let state = realize_full(&full).unwrap();
    assert!(check_tau_realization(&state).is_ok());
    let mut masks: Vec<u64> = state
        .groups()
        .iter()
        .flat_map(|g| &g.blocks)
        .map(|b| b.members)
        .collect();
    assert!(state
        .groups()
        .iter()
        .flat_map(|g| &g.blocks)
        .all(|b| b.size() == b.target));
    masks.sort_unstable();
    assert_eq!(masks, (0..64).collect::<Vec<u64>>());
}

#[test]
fn assignment_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let ty = random_admissible_type(&mut rng, n, 3, 6);
        let mut state = init_realization(&make_full(&ty).unwrap()).unwrap();
        while !state.is_complete() {
            let net = StepNetwork::build(&state).unwrap();
            if net.arcs.len() <= 12 {
                let all = brute_force_assignments(&net);
                let ours = net.solve_arc_flows().unwrap();
                assert!(!all.is_empty());
                assert!(all.contains(&ours));
                checked += 1;
            }
            state = advance(&state).unwrap();
        }
    }
    assert!(checked > 100, "only {checked} small networks");
}

#[test]
fn single_class_single_cell() {
    // N = 1, type {{1}}: one group, one cell with demand 1, no skip
    let mut ty = VType::general(1);
    ty.add(Shape::new(vec![1]), 1u32).unwrap();
    let full = make_full(&ty).unwrap();
    let state = init_realization(&full).unwrap();
    let net = StepNetwork::build(&state).unwrap();
    let choices = integral_step_assignment(&net).unwrap();
    assert_eq!(choices[0], GroupChoice::Block(0));
    assert_eq!(choices[1], GroupChoice::Skip);
}

#[test]
fn fractional_flow_conserves() {
    for (n, v) in [(4, 2), (5, 3), (6, 3), (7, 4), (8, 3)] {
        let full = make_full(&build_optimal_type(n, v).unwrap()).unwrap();
        let mut state = init_realization(&full).unwrap();
        while !state.is_complete() {
            let net = StepNetwork::build(&state).unwrap();
            assert_eq!(net.check_conservation(), Ok(()));
            let demand: u64 = net.cells.iter().map(|c| c.demand).sum();
            assert_eq!(demand, 1u64 << (n - 1));
            assert_eq!(demand + net.skip_demand, state.groups().len() as u64);
            state = advance(&state).unwrap();
        }
    }
}

#[test]
fn broken_state_is_rejected_by_advance() {
    let full = make_full(&build_optimal_type(4, 2).unwrap()).unwrap();
    let mut state = advance(&init_realization(&full).unwrap()).unwrap();
    let g = state
        .groups()
        .iter()
        .position(|g| g.blocks.iter().any(|b| b.members == 1))
        .unwrap();
    for b in &mut state.groups_mut()[g].blocks {
        b.members = 0;
    }
    assert!(advance(&state).is_err());
}

#[test]
fn baranyai_two_subsets_of_four() {
    let mut ty = VType::new(4, 2);
    ty.add(Shape::new(vec![2, 2]), 3u32).unwrap();
    let sys = realize(&ty, RealizeOptions::default()).unwrap();
    assert_eq!(sys.spreads.len(), 3);
    sys.check_structure().unwrap();
    let mut pairs: Vec<Vec<usize>> = sys.spreads.iter().flat_map(|s| s.blocks.clone()).collect();
    pairs.sort();
    assert_eq!(
        pairs,
        vec![
            vec![1, 2],
            vec![1, 3],
            vec![1, 4],
            vec![2, 3],
            vec![2, 4],
            vec![3, 4]
        ]
    );
}

#[test]
fn optimal_three_two() {
    let sys = realize(
        &build_optimal_type(3, 2).unwrap(),
        RealizeOptions::default(),
    )
    .unwrap();
    sys.check_structure().unwrap();
    let mut got = blocks_of(&sys);
    got.sort();
    let mut want = vec![
        vec![vec![], vec![1, 2, 3]],
        vec![vec![1], vec![2, 3]],
        vec![vec![2], vec![1, 3]],
        vec![vec![3], vec![1, 2]],
    ];
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn inadmissible_is_rejected_with_witness() {
    let mut ty = VType::new(3, 2);
    ty.add(Shape::new(vec![1, 2]), 4u32).unwrap();
    match realize(&ty, RealizeOptions::default()) {
        Err(Error::NotAdmissible { size, .. }) => assert_eq!(size, 1),
        other => panic!("expected NotAdmissible, got {other:?}"),
    }
}

#[test]
fn cap_is_enforced() {
    let ty = build_optimal_type(5, 2).unwrap();
    let opts = RealizeOptions {
        cap_n: 4,
        include_fill: false,
    };
    assert!(matches!(
        realize(&ty, opts),
        Err(Error::CapExceeded { n: 5, cap: 4, .. })
    ));
}

#[test]
fn type_fidelity_and_distinctness() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut types = Vec::new();
    for n in 1..=9 {
        types.push(random_admissible_type(&mut rng, n, 4, 16));
        for variant in VariantTag::ALL {
            for v in 2..=variant.max_symbols(n) {
                types.push(build_variant_type(n, v, variant).unwrap());
            }
        }
    }
    for ty in &types {
        let sys = realize(
            ty,
            RealizeOptions {
                include_fill: true,
                ..Default::default()
            },
        )
        .unwrap();
        sys.check_structure().unwrap();
        assert_eq!(
            sys.spreads.iter().map(|s| s.blocks.len()).sum::<usize>(),
            1 << ty.n()
        );

        let mut got: Vec<Shape> = sys.requested().map(|s| s.shape()).collect();
        got.sort();
        let mut want: Vec<Shape> = Vec::new();
        for (s, m) in ty.shapes() {
            want.extend(std::iter::repeat_n(
                s.clone(),
                crate::spread_types::small(m).unwrap() as usize,
            ));
        }
        want.sort();
        assert_eq!(got, want);
    }
}

#[test]
fn realization_is_deterministic() {
    let ty = build_optimal_type(7, 3).unwrap();
    let a = realize(&ty, RealizeOptions::default()).unwrap();
    let b = realize(&ty, RealizeOptions::default()).unwrap();
    assert_eq!(a, b);
}
