use nanotrap::special_math::{clebsch_gordan, wigner_3j, HalfInteger};

pub fn factorial(n: i32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Wigner small-d `d^j_{m'm}(β)` for integer arguments.
pub fn small_d(j: i32, mp: i32, m: i32, beta: f64) -> f64 {
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let pre = (factorial(j + mp) * factorial(j - mp) * factorial(j + m) * factorial(j - m)).sqrt();
    let mut sum = 0.0;
    for k in 0..=(2 * j) {
        let (a, b, cc, d) = (j + m - k, k, j - k - mp, k - m + mp);
        if a < 0 || cc < 0 || d < 0 {
            continue;
        }
        let sign = if (k - m + mp).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        sum += sign / (factorial(a) * factorial(b) * factorial(cc) * factorial(d))
            * c.powi(2 * j - 2 * k + m - mp)
            * s.powi(2 * k - m + mp);
    }
    pre * sum
}

/// `∫₀^π f(β) sin β dβ` by Simpson's rule in `x = cos β`.
pub fn polar_integral(f: impl Fn(f64) -> f64) -> f64 {
    let n = 4000;
    let h = 2.0 / n as f64;
    let g = |x: f64| f(x.clamp(-1.0, 1.0).acos());
    let mut sum = g(-1.0) + g(1.0);
    for k in 1..n {
        let x = -1.0 + k as f64 * h;
        sum += if k % 2 == 1 { 4.0 } else { 2.0 } * g(x);
    }
    sum * h / 3.0
}

/// `⟨J Ω M| cos²θ |J Ω M⟩` by quadrature over the rotation matrix.
pub fn cos2_quadrature(j: i32, omega: i32, m: i32) -> f64 {
    let norm = (2 * j + 1) as f64 / 2.0;
    norm * polar_integral(|b| small_d(j, m, omega, b).powi(2) * b.cos().powi(2))
}

/// Case (a) strength summed over every final `J'` by closure:
/// `(−1)^μ (2J+1)/2 ∫ |d^J_{MΩ}|² |d^1_{μq}|² sin β dβ`, summed over `q`.
pub fn case_a_closure(j: i32, omega: i32, m: i32, mu: i32, qs: &[i32]) -> f64 {
    let norm = (2 * j + 1) as f64 / 2.0;
    let sign = if mu.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    qs.iter()
        .map(|q| sign * norm * polar_integral(|b| small_d(j, m, omega, b).powi(2) * small_d(1, mu, *q, b).powi(2)))
        .sum()
}

pub fn hi(n: i32) -> HalfInteger {
    HalfInteger::from_integer(n)
}

/// Case (b) strength summed over `N'`, `J'`, `M'` in the uncoupled
/// `|N Λ M_N⟩|S M_S⟩` basis built from Clebsch–Gordan coefficients.
pub fn case_b_uncoupled(n: i32, lambda: i32, s: i32, j: i32, m: i32, mu: i32, lambda_abs_final: i32) -> f64 {
    let finals: Vec<i32> = if lambda_abs_final == 0 { vec![0] } else { vec![lambda_abs_final, -lambda_abs_final] };
    let sign = if mu.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let mut total = 0.0;
    for ms in -s..=s {
        let mn = m - ms;
        if mn.abs() > n {
            continue;
        }
        let c: f64 = clebsch_gordan(hi(n), hi(mn), hi(s), hi(ms), hi(j), hi(m)).unwrap();
        for lp in &finals {
            for np in (n - 1).max(lp.abs())..=(n + 1) {
                let mnp = mn + mu;
                if mnp.abs() > np || (lp - lambda).abs() > 1 {
                    continue;
                }
                let rot: f64 = wigner_3j(hi(np), hi(1), hi(n), hi(-mnp), hi(mu), hi(mn)).unwrap();
                let body: f64 = wigner_3j(hi(np), hi(1), hi(n), hi(-lp), hi(lp - lambda), hi(lambda)).unwrap();
                total += c * c * ((2 * n + 1) * (2 * np + 1)) as f64 * rot * rot * body * body;
            }
        }
    }
    sign * total
}
