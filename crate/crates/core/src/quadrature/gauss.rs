use crate::precision::Real;

/// Gauss–Legendre rule on `[-1, 1]`, nodes and weights computed by Newton
/// iteration in the target precision.
#[derive(Debug, Clone)]
pub struct GaussLegendre<R> {
    pub nodes: Vec<R>,
    pub weights: Vec<R>,
}

impl<R: Real> GaussLegendre<R> {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss–Legendre order must be positive");
        let m = order;
        let mut nodes = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        for i in 0..m {
            let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
            let mut x = R::from_f64(guess);
            let mut dp = R::one();
            for iter in 0..100 {
                let (p, d) = legendre(m, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                let small = dx.abs().to_f64() <= 4.0 * R::UNIT_ROUNDOFF * x.abs().to_f64().max(1e-3);
                if small && iter > 1 {
                    let (_, d) = legendre(m, x);
                    dp = d;
                    break;
                }
            }
            let w = R::from_f64(2.0) / ((R::one() - x * x) * dp * dp);
            nodes.push(x);
            weights.push(w);
        }
        GaussLegendre { nodes, weights }
    }

    /// Integrate `f` over `[a, b]`.
    pub fn integrate<T, F>(&self, a: R, b: R, mut f: F, zero: T) -> T
    where
        T: std::ops::Add<Output = T> + Copy,
        F: FnMut(R, R) -> T,
    {
        // f receives (node, weight) already mapped onto [a, b]
        let half = (b - a).mul_f64(0.5);
        let mid = (a + b).mul_f64(0.5);
        let mut acc = zero;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * *x, half * *w);
        }
        acc
    }
}

/// P_m(x) and P_m'(x) by the three-term recurrence.
fn legendre<R: Real>(m: usize, x: R) -> (R, R) {
    let mut p0 = R::one();
    let mut p1 = x;
    for k in 2..=m {
        let kf = k as f64;
        // integer coefficients, then an exact-type division by k
        let p2 = ((x * p1).mul_f64(2.0 * kf - 1.0) - p0.mul_f64(kf - 1.0)) / R::from_f64(kf);
        p0 = p1;
        p1 = p2;
    }
    let d = (x * p1 - p0).mul_f64(m as f64) / (x * x - R::one());
    (p1, d)
}
