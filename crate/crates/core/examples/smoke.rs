// scratch smoke test of builders
use infharm_core::profiles::pow43;
use infharm_core::solutions::*;

fn main() {
    let opts = BuildOptions::default();

    // thm1.ii A=4/3: g-factor should match cos^{4/3} - sin^{4/3}
    let sol = build_thm1_ii(4.0 / 3.0, 0.0, &opts).unwrap();
    println!("thm1.ii meta: {:?}", sol.meta.notes);
    println!("domain: {:?}", sol.domain());
    let mut worst = 0.0f64;
    let mut th = 0.0;
    while th <= std::f64::consts::FRAC_PI_4 - 0.05 {
        let u = sol.evaluate(&[1.0, th]).unwrap();
        let want = pow43(th.cos()) - pow43(th.sin());
        worst = worst.max((u - want).abs());
        th += 0.7853 / 200.0;
    }
    println!("thm1.ii A=4/3 g-factor max err on [0, pi/4-0.05]: {worst:.3e}");

    // left side too
    let mut worst_l = 0.0f64;
    let mut th = -std::f64::consts::FRAC_PI_4 + 0.05;
    while th < 0.0 {
        let u = sol.evaluate(&[1.0, th]).unwrap();
        let want = pow43(th.cos()) - pow43(th.sin());
        worst_l = worst_l.max((u - want).abs());
        th += 0.01;
    }
    println!("left-side max err: {worst_l:.3e}");

    // sample box
    println!("sample box: {:?}", sol.sample_box());

    // thm1.iii defaults
    for b in [0.0, 1.0/3.0, 0.5, 1.0] {
        match build_thm1_iii(b, 0.0, &opts) {
            Ok(s) => println!("thm1.iii B={b}: domain {:?} notes {:?}", s.domain(), s.meta.notes),
            Err(e) => println!("thm1.iii B={b}: ERROR {e}"),
        }
    }

    // thm2 A=0.25, A=0, A=-0.5
    for a in [0.25, 0.0, -0.5, -0.05] {
        match build_thm2(Thm2Which::I, a, 0.0, &opts) {
            Ok(s) => println!("thm2.i A={a}: domain {:?}", s.domain()),
            Err(e) => println!("thm2.i A={a}: ERROR {e}"),
        }
    }

    // thm4.i
    let s4 = build_thm4_i(0.5, 0.2, &opts).unwrap();
    println!("thm4.i domain {:?}", s4.domain());
    println!("thm4.i sample box {:?}", s4.sample_box());

    // thm4.iii
    let s43 = build_thm4_iii(0.2, 0.5, 1, 0.0, &opts).unwrap();
    println!("thm4.iii domain {:?} notes {:?}", s43.domain(), s43.meta.notes);

    // thm1.ii A in figure list
    for a in [1.15, 1.0, 1.0/3.0, 0.15, 0.0, -0.15, -0.05, -1.0/3.0] {
        match build_thm1_ii(a, 0.0, &opts) {
            Ok(s) => println!("thm1.ii A={a}: domain {:?}", s.domain()[1]),
            Err(e) => println!("thm1.ii A={a}: ERROR {e}"),
        }
    }
}
