use infharm_core::solutions::*;
use infharm_core::verify::*;

fn scan(label: &str, built: &Built) {
    let dom = built.domain();
    let (rlo, rhi) = dom[0];
    let f = |p: &[f64]| built.evaluate(p);
    println!("== {label}: r-domain ({rlo:.4}, {rhi:.4})");
    let n = 40;
    for i in 0..n {
        let r = rlo + (rhi - rlo) * (i as f64 + 0.5) / n as f64;
        let out = fd_infty_polar_full(&f, (r, 0.5), 1.25e-3);
        match out {
            Ok(v) => {
                let big = if v.normalized() > 1e-6 { " *" } else { "" };
                println!("   r={r:.4} norm={:.3e}{big}", v.normalized());
            }
            Err(_) => println!("   r={r:.4} (out)"),
        }
    }
}

fn main() {
    let o = BuildOptions::default();
    scan("thm1.iii B=1/2",
        &build_case("thm1.iii", &BuildParams { b: Some(0.5), ..Default::default() }, &o).unwrap());
}
