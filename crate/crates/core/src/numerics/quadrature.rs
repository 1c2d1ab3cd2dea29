//! Composite Gauss–Legendre quadrature with panel doubling.

// 5-point rule on [-1, 1]
const NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

/// Nodes and weights of the composite 5-point rule with `panels` panels.
pub fn composite_nodes(lo: f64, hi: f64, panels: usize) -> Vec<(f64, f64)> {
    let width = (hi - lo) / panels as f64;
    let mut out = Vec::with_capacity(5 * panels);
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * width;
        for (x, w) in NODES.iter().zip(WEIGHTS) {
            out.push((mid + 0.5 * width * x, 0.5 * width * w));
        }
    }
    out
}

pub fn composite<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, panels: usize) -> f64 {
    composite_nodes(lo, hi, panels)
        .into_iter()
        .map(|(x, w)| w * f(x))
        .sum()
}

/// Doubles the panel count until two successive estimates agree to `tol`
/// (absolute) and returns the finer estimate together with its panel count.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, usize) {
    let mut panels = 4;
    let mut prev = composite(&f, lo, hi, panels);
    loop {
        panels *= 2;
        let next = composite(&f, lo, hi, panels);
        if (next - prev).abs() <= tol || panels >= 1 << 16 {
            return (next, panels);
        }
        prev = next;
    }
}
