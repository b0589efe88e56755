//! Reference implementations kept deliberately naive and independent of the
//! library code paths they check.

#![allow(dead_code)]

/// Dense synchronous distress recursion straight from the definition.
/// `l[i][j]` is what `i` owes `j`; returns the seed's DebtRank.
pub fn brute_force_debtrank(l: &[Vec<f64>], capital: &[f64], v: &[f64], seed: usize) -> f64 {
    let n = l.len();
    let mut w = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && l[i][j] > 0.0 {
                w[i][j] = if capital[j] <= 0.0 {
                    1.0
                } else {
                    (l[i][j] / capital[j]).min(1.0)
                };
            }
        }
    }
    // 0 = undistressed, 1 = distressed, 2 = inactive
    let mut s = vec![0u8; n];
    let mut h = vec![0.0; n];
    h[seed] = 1.0;
    s[seed] = 1;
    let h_start = h.clone();
    for _ in 0..=n {
        if !s.contains(&1) {
            break;
        }
        let mut h_next = h.clone();
        for j in 0..n {
            let mut inflow = 0.0;
            for i in 0..n {
                if s[i] == 1 {
                    inflow += w[i][j] * h[i];
                }
            }
            h_next[j] = (h[j] + inflow).min(1.0);
        }
        let mut s_next = s.clone();
        for j in 0..n {
            if s[j] == 1 {
                s_next[j] = 2;
            } else if s[j] == 0 && h_next[j] > 0.0 {
                s_next[j] = 1;
            }
        }
        h = h_next;
        s = s_next;
    }
    assert!(!s.contains(&1), "oracle failed to terminate");
    let mut end = 0.0;
    let mut start = 0.0;
    for j in 0..n {
        end += h[j] * v[j];
        start += h_start[j] * v[j];
    }
    end - start
}

/// Liability-share weights `v_i = Σ_j L_ij / V`.
pub fn liability_weights(l: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let total: f64 = l.iter().flatten().sum();
    if total <= 0.0 {
        return (vec![0.0; l.len()], 0.0);
    }
    (l.iter().map(|row| row.iter().sum::<f64>() / total).collect(), total)
}

/// Adaptive Simpson quadrature.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            return left + right + diff / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 50)
}

/// `∫_0^T e^{−rt} p̂(t) dt` with the default density of a constant hazard.
pub fn quadrature_discount_mass(hazard: f64, rate: f64, term: f64) -> f64 {
    let density = |t: f64| (-rate * t).exp() * hazard * (-hazard * t).exp();
    integrate(&density, 0.0, term, 1e-15)
}

/// Random dense liability matrix with roughly `density` of off-diagonal
/// entries nonzero, drawn from a simple xorshift stream.
pub struct XorShift(pub u64);

impl XorShift {
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

pub fn random_matrix(rng: &mut XorShift, n: usize, density: f64, scale: f64) -> Vec<Vec<f64>> {
    let mut l = vec![vec![0.0; n]; n];
    for (i, row) in l.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            if i != j && rng.unit() < density {
                *x = scale * rng.unit();
            }
        }
    }
    l
}

pub fn random_capital(rng: &mut XorShift, n: usize, scale: f64) -> Vec<f64> {
    (0..n)
        .map(|_| {
            // occasionally zero or negative to exercise the degenerate rule
            match rng.below(10) {
                0 => 0.0,
                1 => -scale * rng.unit(),
                _ => scale * rng.unit(),
            }
        })
        .collect()
}
