// Boundary cases for the theorem admissibility sets, each evaluated by hand.
// Dyadic values are used wherever an inequality is tested at equality.

use plate_core::verify::{HypothesisPoint, Theorem};

pub struct Case {
    pub name: &'static str,
    pub theorem: Theorem,
    pub point: HypothesisPoint,
    pub admissible: bool,
}

const fn pt(n: usize, s: f64, sigma: f64, p: f64, q: f64, lambda: f64, theta: f64) -> HypothesisPoint {
    HypothesisPoint { n, s, sigma, p, q, lambda, theta }
}

const fn case(name: &'static str, theorem: Theorem, point: HypothesisPoint, admissible: bool) -> Case {
    Case { name, theorem, point, admissible }
}

use Theorem::{GlobalBessel as G2, GlobalHs as G1, Local as L};

// A: n=1, s=0.15, σ=0.1, p=q=10, λ=5, θ=0.9 gives α = 0.175 < 1/λ = 0.2.
// B: n=1, s=0.5, σ=0.3, p=2, q=4, λ=3, θ=0.75.
// C: n=2, s=1, σ=0.6, p=2, q=4, λ=3, θ=0.1.
pub const CASES: &[Case] = &[
    case("n(lambda-2)=2 at n=1 is excluded", G1, pt(1, 1.0, 0.0, 2.0, 2.0, 4.0, 1.0), false),
    case("n(lambda-2)>2 just above at n=1", G1, pt(1, 1.0, 0.0, 2.0, 2.0, 4.01, 1.0), true),
    case("n(lambda-2)=2 at n=2 is excluded", G1, pt(2, 0.5, 0.0, 2.0, 2.0, 3.0, 1.0), false),
    case("n(lambda-2)>2 just above at n=2", G1, pt(2, 0.5, 0.0, 2.0, 2.0, 3.01, 1.0), true),
    case("s=(n-2)/2 at n=2 is excluded", G1, pt(2, 0.0, 0.0, 2.0, 2.0, 4.0, 1.0), false),
    case("s just above (n-2)/2 at n=2", G1, pt(2, 0.001, 0.0, 2.0, 2.0, 4.0, 1.0), true),
    case("s=(n-2)/2 at n=1 is excluded", G1, pt(1, -0.5, 0.0, 2.0, 2.0, 5.0, 1.0), false),
    case("s just above (n-2)/2 at n=1", G1, pt(1, -0.49, 0.0, 2.0, 2.0, 5.0, 1.0), true),
    case("theta below 1", G1, pt(2, 1.0, 0.0, 2.0, 2.0, 4.0, 0.99), false),
    case("lambda below 3 with n(lambda-2)>2", G1, pt(3, 1.0, 0.0, 2.0, 2.0, 2.99, 1.0), false),
    case("point A", G2, pt(1, 0.15, 0.1, 10.0, 10.0, 5.0, 0.9), true),
    case("A with s at the open upper bound", G2, pt(1, 0.2, 0.1, 10.0, 10.0, 5.0, 0.9), false),
    case("A with s = sigma", G2, pt(1, 0.1, 0.1, 10.0, 10.0, 5.0, 0.9), false),
    case("A with sigma = 3-n-2theta", G2, pt(1, 0.15, 0.2, 10.0, 10.0, 5.0, 0.9), false),
    case("A with lambda=4 keeps 1/lambda > alpha", G2, pt(1, 0.15, 0.1, 10.0, 10.0, 4.0, 0.9), true),
    case("A with lambda=3 breaks 1/lambda > alpha", G2, pt(1, 0.15, 0.1, 10.0, 10.0, 3.0, 0.9), false),
    case("A with theta=1 forces sigma < 0", G2, pt(1, 0.15, 0.1, 10.0, 10.0, 5.0, 1.0), false),
    case("A with p=q=5 gives alpha = 1/lambda", G2, pt(1, 0.15, 0.1, 5.0, 5.0, 5.0, 0.9), false),
    case("A with q=20 lowers the s ceiling", G2, pt(1, 0.16, 0.1, 10.0, 20.0, 5.0, 0.9), false),
    case("A with p=2 makes alpha too large", G2, pt(1, 0.15, 0.1, 2.0, 10.0, 5.0, 0.9), false),
    case("A is not local: (n/2)(1-2/p)lambda = 2", L, pt(1, 0.15, 0.1, 10.0, 10.0, 5.0, 0.9), false),
    case("point B", L, pt(1, 0.5, 0.3, 2.0, 4.0, 3.0, 0.75), true),
    case("B with p=2.5", L, pt(1, 0.5, 0.3, 2.5, 4.0, 3.0, 0.75), true),
    case("B with theta=(2-n)/2", L, pt(1, 0.5, 0.3, 2.0, 4.0, 3.0, 0.5), false),
    case("B is not global: alpha > 1/lambda", G2, pt(1, 0.5, 0.3, 2.0, 4.0, 3.0, 0.75), false),
    case("B with p > q", L, pt(1, 0.5, 0.3, 8.0, 4.0, 3.0, 0.75), false),
    case("B with lambda below 2", L, pt(1, 0.5, 0.3, 2.0, 4.0, 1.5, 0.75), false),
    case("theta=0 at n=2", L, pt(2, 1.0, 0.6, 2.0, 4.0, 3.0, 0.0), false),
    case("point C", L, pt(2, 1.0, 0.6, 2.0, 4.0, 3.0, 0.1), true),
    case("C with sigma = 3-n-2theta", L, pt(2, 1.0, 0.8, 2.0, 4.0, 3.0, 0.1), false),
    case("C with sigma = n(1/p-1/q)", L, pt(2, 0.875, 0.5, 2.0, 4.0, 3.0, 0.1), true),
    case("C with sigma just below n(1/p-1/q)", L, pt(2, 0.875, 0.4921875, 2.0, 4.0, 3.0, 0.1), false),
    case("C with s at the closed lower bound", L, pt(2, 0.875, 0.625, 2.0, 4.0, 3.0, 0.1), true),
    case("C with s just below the lower bound", L, pt(2, 0.8740234375, 0.625, 2.0, 4.0, 3.0, 0.1), false),
];
