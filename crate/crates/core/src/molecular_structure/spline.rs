use crate::scalar::{lit, Real};

/// Natural cubic spline through tabulated points.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline<T> {
    x: Vec<T>,
    y: Vec<T>,
    /// Second derivatives at the knots.
    m: Vec<T>,
}

impl<T: Real> CubicSpline<T> {
    /// `x` must be strictly ascending with at least two points.
    pub fn natural(x: Vec<T>, y: Vec<T>) -> Option<Self> {
        let n = x.len();
        if n < 2 || y.len() != n || x.windows(2).any(|w| !(w[1] > w[0])) {
            return None;
        }
        let mut m = vec![T::zero(); n];
        if n > 2 {
            // Thomas algorithm on the interior equations
            let mut diag = vec![T::zero(); n];
            let mut rhs = vec![T::zero(); n];
            for i in 1..n - 1 {
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                diag[i] = lit::<T>(2.0) * (h0 + h1);
                rhs[i] = lit::<T>(6.0) * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            }
            for i in 2..n - 1 {
                let h0 = x[i] - x[i - 1];
                let w = h0 / diag[i - 1];
                diag[i] = diag[i] - w * h0;
                rhs[i] = rhs[i] - w * rhs[i - 1];
            }
            for i in (1..n - 1).rev() {
                let h1 = x[i + 1] - x[i];
                m[i] = (rhs[i] - h1 * m[i + 1]) / diag[i];
            }
        }
        Some(Self { x, y, m })
    }

    pub fn domain(&self) -> (T, T) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    pub fn contains(&self, t: T) -> bool {
        let (lo, hi) = self.domain();
        t >= lo && t <= hi
    }

    /// Value at `t`; outside the knots the end cubic is continued.
    pub fn eval(&self, t: T) -> T {
        let n = self.x.len();
        let i = match self.x.binary_search_by(|v| v.partial_cmp(&t).unwrap_or(std::cmp::Ordering::Less)) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        };
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let six = lit::<T>(6.0);
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / six
    }
}
