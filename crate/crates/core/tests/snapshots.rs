use wavescatter::tdse::{initialize, propagate, snapshot, GridSpec, Snapshot};
use wavescatter::{make_barrier, make_step, GaussianPacket};

fn local_maxima(s: &Snapshot<f64>, lo: f64, hi: f64, floor: f64) -> Vec<(f64, f64)> {
    (1..s.x.len() - 1)
        .filter(|&i| s.x[i] > lo && s.x[i] < hi)
        .filter(|&i| s.abs_psi[i] > floor && s.abs_psi[i] >= s.abs_psi[i - 1] && s.abs_psi[i] > s.abs_psi[i + 1])
        .map(|i| (s.x[i], s.abs_psi[i]))
        .collect()
}

#[test]
fn step_collision_shows_fringes_on_the_incident_side_only() {
    let k0 = 2.0;
    let p = GaussianPacket::new(k0, 16.0, 120.0).unwrap();
    let spec = GridSpec { x_min: -384.0, x_max: 384.0, n: 4096, dt: None };
    let grid = initialize(&p, &spec).unwrap();
    // center arrives at the step after a / k0
    let steps = (p.a / k0 / grid.dt).round() as usize;
    let grid = propagate(grid, &make_step(1.5), steps).unwrap();
    let snap = snapshot(&grid);

    let fringes = local_maxima(&snap, -30.0, -2.0, 1e-3);
    assert!(fringes.len() >= 10, "{} fringes", fringes.len());
    let spacing = (fringes.last().unwrap().0 - fringes[0].0) / (fringes.len() - 1) as f64;
    let expected = std::f64::consts::PI / k0;
    assert!((spacing - expected).abs() < 0.03 * expected, "spacing {spacing} vs {expected}");

    let right = local_maxima(&snap, 0.5, 60.0, 1e-3);
    assert!(right.len() <= 1, "{right:?}");
}

#[test]
fn barrier_emits_a_train_of_diminishing_packets() {
    // kappa0 = 2, so each extra round trip lags by 2a / kappa0 and the
    // transmitted packets sit 2a k0 / kappa0 apart
    let (k0, v0, a) = (5.0_f64, 10.5, 30.0);
    let kappa0 = (k0 * k0 - 2.0 * v0).sqrt();
    let p = GaussianPacket::new(k0, 20.0, 200.0).unwrap();
    let spec = GridSpec { x_min: -600.0, x_max: 600.0, n: 16384, dt: None };
    let grid = initialize(&p, &spec).unwrap();
    let t_end = p.a / k0 + 6.0 * a / kappa0;
    let steps = (t_end / grid.dt).round() as usize;
    let grid = propagate(grid, &make_barrier(v0, a).unwrap(), steps).unwrap();
    let snap = snapshot(&grid);

    let mut humps: Vec<(f64, f64)> = Vec::new();
    for (x, h) in local_maxima(&snap, a + 5.0, 590.0, 1e-5) {
        match humps.last_mut() {
            Some(last) if x - last.0 < 40.0 => {
                if h > last.1 {
                    *last = (x, h);
                }
            }
            _ => humps.push((x, h)),
        }
    }
    assert!(humps.len() >= 3, "{humps:?}");
    let expected = 2.0 * a * k0 / kappa0;
    for w in humps.windows(2) {
        let gap = w[1].0 - w[0].0;
        assert!((gap - expected).abs() < 0.1 * expected, "gap {gap} vs {expected}: {humps:?}");
        // the leading packet is the oldest and largest
        assert!(w[1].1 > w[0].1, "{humps:?}");
    }
}
