//! Gauss–Legendre quadrature nodes.

/// Nodes and weights of the 16-point rule on `[-1, 1]`.
pub fn gauss_legendre_16() -> [(f64, f64); 16] {
    const X: [f64; 8] = [
        0.0950125098376374,
        0.2816035507792589,
        0.4580167776572274,
        0.6178762444026438,
        0.7554044083550030,
        0.8656312023878318,
        0.9445750230732326,
        0.9894009349916499,
    ];
    const W: [f64; 8] = [
        0.1894506104550685,
        0.1826034150449236,
        0.1691565193950025,
        0.1495959888165767,
        0.1246289712555339,
        0.0951585116824928,
        0.0622535239386479,
        0.0271524594117541,
    ];
    let mut out = [(0.0, 0.0); 16];
    for i in 0..8 {
        out[2 * i] = (-X[i], W[i]);
        out[2 * i + 1] = (X[i], W[i]);
    }
    out
}

/// Integrates `f` over `[a, b]` with `pieces` composite 16-point panels.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, pieces: usize) -> f64 {
    let rule = gauss_legendre_16();
    let h = (b - a) / pieces as f64;
    let mut total = 0.0;
    for k in 0..pieces {
        let lo = a + k as f64 * h;
        for (x, w) in rule {
            total += w * f(lo + 0.5 * h * (x + 1.0));
        }
    }
    total * 0.5 * h
}
