//! Dense bounded-variable primal simplex.
//!
//! Solves `minimize c·x  s.t.  A x = b,  lo ≤ x ≤ hi` for problems with few
//! rows and many columns (one row per vertex, one column per edge). Bland's
//! rule keeps it from cycling; the final basic solution is recomputed from the
//! original data by LU so the equality residual is at machine precision.

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct Problem {
    pub rows: usize,
    /// Column-major: `columns[j]` holds the sparse entries `(row, value)` of column j.
    pub columns: Vec<Vec<(usize, f64)>>,
    pub rhs: Vec<f64>,
    pub cost: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible { worst_row: usize },
    Unbounded,
    IterationLimit,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Status {
    Basic(usize),
    AtLower,
    AtUpper,
}

struct Tableau {
    rows: usize,
    cols: usize,
    /// rows × cols, row-major: B⁻¹A.
    t: Vec<f64>,
    /// Current values of the basic variables.
    beta: Vec<f64>,
    basis: Vec<usize>,
    status: Vec<Status>,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.cols + j]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let cols = self.cols;
        let p = self.t[r * cols + c];
        for j in 0..cols {
            self.t[r * cols + j] /= p;
        }
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.t[i * cols + c];
            if f != 0.0 {
                for j in 0..cols {
                    let v = self.t[r * cols + j];
                    if v != 0.0 {
                        self.t[i * cols + j] -= f * v;
                    }
                }
            }
        }
    }

    /// Runs simplex iterations for `cost` restricted to columns in `allowed`.
    /// Returns false on unboundedness.
    fn optimize(&mut self, cost: &[f64], allowed: &[bool], max_iter: usize) -> Option<bool> {
        for _ in 0..max_iter {
            // reduced costs d_j = c_j - c_B^T (B^-1 A)_j
            let mut enter = None;
            for j in 0..self.cols {
                if !allowed[j] {
                    continue;
                }
                let st = self.status[j];
                if matches!(st, Status::Basic(_)) || self.hi[j] - self.lo[j] <= 0.0 {
                    continue;
                }
                let mut d = cost[j];
                for i in 0..self.rows {
                    let a = self.at(i, j);
                    if a != 0.0 {
                        d -= cost[self.basis[i]] * a;
                    }
                }
                let improving = match st {
                    Status::AtLower => d < -COST_TOL,
                    Status::AtUpper => d > COST_TOL,
                    Status::Basic(_) => false,
                };
                if improving {
                    enter = Some(j);
                    break;
                }
            }
            let Some(j) = enter else {
                return Some(true);
            };
            // direction: +1 when increasing from lower, -1 when decreasing from upper
            let dir = if self.status[j] == Status::AtLower { 1.0 } else { -1.0 };
            let mut theta = self.hi[j] - self.lo[j];
            let mut leave: Option<(usize, bool)> = None; // (row, leaves at upper)
            for i in 0..self.rows {
                let a = self.at(i, j) * dir;
                let b = self.basis[i];
                let cand = if a > PIVOT_TOL {
                    Some(((self.beta[i] - self.lo[b]).max(0.0) / a, false))
                } else if a < -PIVOT_TOL && self.hi[b].is_finite() {
                    Some(((self.hi[b] - self.beta[i]).max(0.0) / -a, true))
                } else {
                    None
                };
                if let Some((th, up)) = cand {
                    let better = match leave {
                        None => th < theta || (th == theta && theta.is_finite()),
                        Some((r, _)) => th < theta || (th == theta && b < self.basis[r]),
                    };
                    if better {
                        theta = th;
                        leave = Some((i, up));
                    }
                }
            }
            if !theta.is_finite() {
                return Some(false);
            }
            // move entering variable by theta
            for i in 0..self.rows {
                self.beta[i] -= dir * theta * self.at(i, j);
            }
            match leave {
                None => {
                    self.status[j] = if self.status[j] == Status::AtLower {
                        Status::AtUpper
                    } else {
                        Status::AtLower
                    };
                }
                Some((r, up)) => {
                    let out = self.basis[r];
                    let entering_value = if dir > 0.0 {
                        self.lo[j] + theta
                    } else {
                        self.hi[j] - theta
                    };
                    self.status[out] = if up { Status::AtUpper } else { Status::AtLower };
                    self.pivot(r, j);
                    self.basis[r] = j;
                    self.status[j] = Status::Basic(r);
                    self.beta[r] = entering_value;
                }
            }
        }
        None
    }
}

/// Solves the problem. All lower bounds must be finite.
pub fn solve(p: &Problem) -> Outcome {
    let m = p.rows;
    let n = p.columns.len();
    assert!(p.lower.iter().all(|l| l.is_finite()));
    // structural columns start at their lower bounds
    let mut resid = p.rhs.clone();
    for (j, col) in p.columns.iter().enumerate() {
        for &(i, a) in col {
            resid[i] -= a * p.lower[j];
        }
    }
    let cols = n + m;
    let mut t = vec![0.0; m * cols];
    let sign: Vec<f64> = resid.iter().map(|&r| if r < 0.0 { -1.0 } else { 1.0 }).collect();
    for (j, col) in p.columns.iter().enumerate() {
        for &(i, a) in col {
            t[i * cols + j] += a * sign[i];
        }
    }
    for i in 0..m {
        t[i * cols + n + i] = 1.0;
    }
    let mut lo = p.lower.clone();
    let mut hi = p.upper.clone();
    lo.extend(std::iter::repeat(0.0).take(m));
    hi.extend(std::iter::repeat(f64::INFINITY).take(m));
    let mut status = vec![Status::AtLower; cols];
    for i in 0..m {
        status[n + i] = Status::Basic(i);
    }
    let mut tab = Tableau {
        rows: m,
        cols,
        t,
        beta: resid.iter().map(|r| r.abs()).collect(),
        basis: (n..n + m).collect(),
        status,
        lo,
        hi,
    };
    let max_iter = 50 * (cols + m) + 1000;

    // phase I
    let mut phase1 = vec![0.0; cols];
    for c in phase1.iter_mut().skip(n) {
        *c = 1.0;
    }
    let all = vec![true; cols];
    match tab.optimize(&phase1, &all, max_iter) {
        None => return Outcome::IterationLimit,
        Some(false) => unreachable!("phase I objective is bounded below"),
        Some(true) => {}
    }
    let infeas: f64 = (0..m)
        .filter(|&i| tab.basis[i] >= n)
        .map(|i| tab.beta[i])
        .sum();
    let scale = 1.0 + p.rhs.iter().map(|b| b.abs()).fold(0.0, f64::max);
    if infeas > FEAS_TOL * scale {
        let worst_row = (0..m)
            .filter(|&i| tab.basis[i] >= n)
            .max_by(|&a, &b| tab.beta[a].total_cmp(&tab.beta[b]))
            .map(|i| tab.basis[i] - n)
            .unwrap_or(0);
        return Outcome::Infeasible { worst_row };
    }
    // pin artificials at zero
    for j in n..cols {
        tab.hi[j] = 0.0;
    }
    // phase II
    let mut cost = p.cost.clone();
    cost.extend(std::iter::repeat(0.0).take(m));
    let mut structural = vec![true; cols];
    for s in structural.iter_mut().skip(n) {
        *s = false;
    }
    match tab.optimize(&cost, &structural, max_iter) {
        None => return Outcome::IterationLimit,
        Some(false) => return Outcome::Unbounded,
        Some(true) => {}
    }
    let x = recompute(p, &tab);
    let objective = x.iter().zip(&p.cost).map(|(a, b)| a * b).sum();
    Outcome::Optimal { x, objective }
}

/// Nonbasic columns sit at their bounds; solve B x_B = b - N x_N from the
/// original column data.
fn recompute(p: &Problem, tab: &Tableau) -> Vec<f64> {
    let m = p.rows;
    let n = p.columns.len();
    let mut x = vec![0.0; n];
    for j in 0..n {
        x[j] = match tab.status[j] {
            Status::AtLower => p.lower[j],
            Status::AtUpper => p.upper[j],
            Status::Basic(_) => 0.0,
        };
    }
    let mut rhs = p.rhs.clone();
    for j in 0..n {
        if !matches!(tab.status[j], Status::Basic(_)) {
            for &(i, a) in &p.columns[j] {
                rhs[i] -= a * x[j];
            }
        }
    }
    // basis columns (artificial columns are unit vectors with the phase-I sign)
    let mut b = vec![0.0; m * m];
    for (r, &j) in tab.basis.iter().enumerate() {
        if j < n {
            for &(i, a) in &p.columns[j] {
                b[i * m + r] = a;
            }
        } else {
            b[(j - n) * m + r] = 1.0;
        }
    }
    match lu_solve(m, &mut b, &mut rhs) {
        Some(xb) => {
            for (r, &j) in tab.basis.iter().enumerate() {
                if j < n {
                    x[j] = xb[r];
                }
            }
        }
        None => {
            for (r, &j) in tab.basis.iter().enumerate() {
                if j < n {
                    x[j] = tab.beta[r];
                }
            }
        }
    }
    for j in 0..n {
        x[j] = x[j].clamp(p.lower[j], p.upper[j]);
    }
    x
}

fn lu_solve(m: usize, a: &mut [f64], b: &mut [f64]) -> Option<Vec<f64>> {
    for c in 0..m {
        let (piv, best) = (c..m)
            .map(|r| (r, a[r * m + c].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if best < 1e-14 {
            return None;
        }
        if piv != c {
            for j in 0..m {
                a.swap(c * m + j, piv * m + j);
            }
            b.swap(c, piv);
        }
        for r in c + 1..m {
            let f = a[r * m + c] / a[c * m + c];
            if f != 0.0 {
                for j in c..m {
                    a[r * m + j] -= f * a[c * m + j];
                }
                b[r] -= f * b[c];
            }
        }
    }
    let mut x = vec![0.0; m];
    for r in (0..m).rev() {
        let mut s = b[r];
        for j in r + 1..m {
            s -= a[r * m + j] * x[j];
        }
        x[r] = s / a[r * m + r];
    }
    Some(x)
}
