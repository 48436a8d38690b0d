use infharm_core::solutions::*;
use infharm_core::verify::*;

fn run(label: &str, built: &Built) {
    let samples = sample_points(&built.sample_box(), 20, 0);
    let steps = default_h_ladder();
    match verify_solution(built, &samples, &steps) {
        Ok((_, s)) => println!(
            "{label:28} max_norm={:.3e} med_order={:+.3} zero={} cross={:?}",
            s.max_normalized_smallest_h, s.median_observed_order, s.all_raw_zero,
            s.cross_max_diff_smallest_h.map(|v| format!("{v:.1e}")),
        ),
        Err(e) => println!("{label:28} ERROR {e}"),
    }
}

fn main() {
    let o = BuildOptions::default();
    let b = |id: &str, p: BuildParams| build_case(id, &p, &o).unwrap();
    let pa = |v: f64| BuildParams { a: vec![v], ..Default::default() };
    let pb = |v: f64| BuildParams { b: Some(v), ..Default::default() };

    run("thm1.i (0.5,0.5)", &b("thm1.i", BuildParams { a: vec![0.5], b: Some(0.5), ..Default::default() }));
    run("thm1.i (0.25,s3/4)", &b("thm1.i", BuildParams { a: vec![0.25], b: Some(SQRT3_OVER_4), ..Default::default() }));
    run("thm1.i (0.75,-s3/4)", &b("thm1.i", BuildParams { a: vec![0.75], b: Some(-SQRT3_OVER_4), ..Default::default() }));
    run("thm1.ii A=4/3", &b("thm1.ii", pa(4.0 / 3.0)));
    run("thm1.ii A=-1/3", &b("thm1.ii", pa(-1.0 / 3.0)));
    run("thm1.ii A=0", &b("thm1.ii", pa(0.0)));
    run("thm1.ii A=1", &b("thm1.ii", pa(1.0)));
    run("thm1.iii B=1/3", &b("thm1.iii", pb(1.0 / 3.0)));
    run("thm1.iii B=1/2", &b("thm1.iii", pb(0.5)));
    run("thm1.iii B=1", &b("thm1.iii", pb(1.0)));
    run("thm2.i A=0", &b("thm2.i", pa(0.0)));
    run("thm2.i A=0.25", &b("thm2.i", pa(0.25)));
    run("thm3 n=3", &b("thm3", BuildParams { a: vec![0.3, 0.2], ..Default::default() }));
    run("thm4.i (0.5,0.2)", &b("thm4.i", BuildParams { a: vec![0.5], b: Some(0.2), ..Default::default() }));
    run("thm4.ii A=4/3", &b("thm4.ii", pa(4.0 / 3.0)));
    run("thm4.iii (0.2,0.5)", &b("thm4.iii", BuildParams { b: Some(0.2), c_big: Some(0.5), ..Default::default() }));
    run("aronsson", &b("aronsson", BuildParams::default()));
    run("aronsson-neg", &b("aronsson-neg", BuildParams::default()));
    // negative control
    run("NEG thm1.i (0.5,0.6)", &Built::Separated(
        SeparatedSolution::new(
            CoordSystem::Polar2D,
            vec![Factor::Power { exponent: 0.5 }, Factor::Exponential { rate: 0.6, center: 0.0 }],
            CaseMeta::default(),
        ).unwrap()
    ));
}
