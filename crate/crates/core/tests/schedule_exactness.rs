use evrptw_core::oracle::bruteforce_route;
use evrptw_core::schedule::price;
use evrptw_core::synth::random_case;
use evrptw_core::verify::check_route;
use evrptw_core::CaseTag;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CASES: usize = 500;

fn agree(tag: CaseTag, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..CASES {
        let (inst, route) = random_case(&mut rng, tag);
        let dp = price(&inst, &route).unwrap();
        let bf = bruteforce_route(&inst, &route).unwrap();
        match (&dp, &bf) {
            (Some(a), Some(b)) => {
                let check = check_route(&inst, &route, &a.plan);
                assert!(
                    check.feasible(),
                    "case {i}: DP plan infeasible {:?}\n{}",
                    check.violations,
                    inst.to_text()
                );
                assert!(
                    (check.objective - a.f_elec).abs() < 1e-6,
                    "case {i}: reported {} verified {}",
                    a.f_elec,
                    check.objective
                );
                assert!(
                    (a.f_elec - b.f_elec).abs() <= 1e-9 * b.f_elec.abs().max(1.0),
                    "case {i}: dp {} bf {} route {:?}\ndp {:?}\nbf {:?}\n{}",
                    a.f_elec,
                    b.f_elec,
                    route.nodes,
                    a.plan,
                    b.plan,
                    inst.to_text()
                );
            }
            (None, None) => {}
            _ => panic!(
                "case {i}: dp {:?} bf {:?} route {:?}\n{}",
                dp,
                bf,
                route.nodes,
                inst.to_text()
            ),
        }
    }
}

#[test]
fn zero_station_matches_bruteforce() {
    agree(CaseTag::ZeroStation, 11);
}

#[test]
fn one_station_matches_bruteforce() {
    agree(CaseTag::OneStation, 12);
}

#[test]
fn two_station_recharge_matches_bruteforce() {
    agree(CaseTag::TwoStationRecharge, 13);
}

#[test]
fn two_station_discharge_matches_bruteforce() {
    agree(CaseTag::TwoStationDischarge, 14);
}
