//! Dense complex polynomials in ascending coefficient order, with root
//! finding and multiplicity detection.

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance for reproducing a polynomial from clustered roots.
pub const REPRODUCTION_RTOL: f64 = 1e-10;
/// Roots closer than this (relative to `max(1, |z|)`) are candidates for a
/// multiple root.
const CLUSTER_RTOL: f64 = 1e-3;

pub fn trim(p: &[Complex64]) -> Vec<Complex64> {
    let n = p.iter().rposition(|c| *c != ZERO).map_or(0, |i| i + 1);
    p[..n].to_vec()
}

pub fn degree(p: &[Complex64]) -> Option<usize> {
    p.iter().rposition(|c| *c != ZERO)
}

pub fn eval(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(ZERO, |acc, c| acc * z + c)
}

pub fn derivative(p: &[Complex64]) -> Vec<Complex64> {
    p.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
}

pub fn mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients of `p(c + u)` in powers of `u`.
pub fn taylor_shift(p: &[Complex64], c: Complex64) -> Vec<Complex64> {
    let mut q = p.to_vec();
    let n = q.len();
    // repeated synthetic division
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = q[j + 1] * c;
            q[j] += t;
        }
    }
    q
}

/// Monic polynomial `Π (s - r)^m`.
pub fn from_roots(roots: &[(Complex64, usize)]) -> Vec<Complex64> {
    let mut p = vec![ONE];
    for &(r, m) in roots {
        for _ in 0..m {
            p = mul(&p, &[-r, ONE]);
        }
    }
    p
}

/// First `order` Taylor coefficients of `num / den` at zero; `den[0] != 0`.
pub fn series_div(num: &[Complex64], den: &[Complex64], order: usize) -> Vec<Complex64> {
    let mut q = vec![ZERO; order];
    for k in 0..order {
        let mut acc = num.get(k).copied().unwrap_or(ZERO);
        for j in 1..=k.min(den.len().saturating_sub(1)) {
            acc -= den[j] * q[k - j];
        }
        q[k] = acc / den[0];
    }
    q
}

/// All roots of `p` (with repetition) by Aberth–Ehrlich iteration followed
/// by a Newton polish.
pub fn roots(p: &[Complex64]) -> Vec<Complex64> {
    let p = trim(p);
    let Some(n) = degree(&p) else {
        return Vec::new();
    };
    if n == 0 {
        return Vec::new();
    }
    let lead = p[n];
    let monic: Vec<Complex64> = p.iter().map(|c| c / lead).collect();
    if n == 1 {
        return vec![-monic[0]];
    }
    let dp = derivative(&monic);
    // Fujiwara-style bound for the initial circle
    let radius = (0..n).map(|k| monic[k].norm().powf(1.0 / (n - k) as f64)).fold(0.0, f64::max).max(1e-3);
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4)).collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let pk = eval(&monic, z[k]);
            if pk == ZERO {
                continue;
            }
            let ratio = pk / eval(&dp, z[k]);
            let repulsion: Complex64 = (0..n).filter(|&j| j != k).map(|j| ONE / (z[k] - z[j])).sum();
            let step = ratio / (ONE - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / z[k].norm().max(1e-300));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let d = eval(&dp, *zk);
            if d == ZERO {
                break;
            }
            let next = *zk - eval(&monic, *zk) / d;
            if eval(&monic, next).norm() < eval(&monic, *zk).norm() {
                *zk = next;
            } else {
                break;
            }
        }
    }
    z
}

fn reproduces(monic: &[Complex64], roots: &[(Complex64, usize)]) -> bool {
    let q = from_roots(roots);
    let scale = monic.iter().map(|c| c.norm()).fold(1.0, f64::max);
    q.len() == monic.len() && q.iter().zip(monic).all(|(a, b)| (a - b).norm() <= REPRODUCTION_RTOL * scale)
}

/// Roots with multiplicities.
///
/// Nearby roots are merged into one multiple root at their centroid when
/// the merged factorization still reproduces `p` to `1e-10`.
pub fn roots_with_multiplicity(p: &[Complex64]) -> Vec<(Complex64, usize)> {
    let p = trim(p);
    let Some(n) = degree(&p) else {
        return Vec::new();
    };
    let monic: Vec<Complex64> = p.iter().map(|c| c / p[n]).collect();
    let raw = roots(&monic);
    // single-linkage candidate clusters
    let mut label: Vec<usize> = (0..raw.len()).collect();
    for i in 0..raw.len() {
        for j in 0..i {
            let tol = CLUSTER_RTOL * raw[i].norm().max(raw[j].norm()).max(1.0);
            if (raw[i] - raw[j]).norm() <= tol {
                let (a, b) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == a {
                        *l = b;
                    }
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..raw.len() {
        match groups.iter_mut().find(|g| label[g[0]] == label[i]) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    let candidates: Vec<(Vec<usize>, Complex64)> = groups
        .into_iter()
        .filter(|g| g.len() > 1)
        .map(|g| {
            let m = g.len();
            let centroid = g.iter().map(|&i| raw[i]).sum::<Complex64>() / m as f64;
            let centroid = polish_multiple(&monic, centroid, m);
            (g, centroid)
        })
        .collect();
    // Merge every candidate, then give up clusters one at a time until the
    // factorization reproduces the polynomial.
    let mut active: Vec<bool> = vec![true; candidates.len()];
    let assemble = |active: &[bool]| -> Vec<(Complex64, usize)> {
        let mut out = Vec::with_capacity(raw.len());
        let mut taken = vec![false; raw.len()];
        for ((g, centroid), _) in candidates.iter().zip(active).filter(|(_, &a)| a) {
            out.push((*centroid, g.len()));
            for &i in g {
                taken[i] = true;
            }
        }
        out.extend(raw.iter().zip(&taken).filter(|(_, &t)| !t).map(|(&r, _)| (r, 1)));
        out
    };
    loop {
        let trial = assemble(&active);
        if reproduces(&monic, &trial) || !active.iter().any(|&a| a) {
            return order_like(trial, &raw);
        }
        let dropped = (0..active.len()).filter(|&k| active[k]).find(|&k| {
            let mut fewer = active.clone();
            fewer[k] = false;
            reproduces(&monic, &assemble(&fewer))
        });
        match dropped {
            Some(k) => active[k] = false,
            None => active.iter_mut().for_each(|a| *a = false),
        }
    }
}

/// Orders roots by the position of their nearest raw root, so the output
/// follows the root finder's order.
fn order_like(mut roots: Vec<(Complex64, usize)>, raw: &[Complex64]) -> Vec<(Complex64, usize)> {
    let key =
        |z: Complex64| (0..raw.len()).min_by(|&a, &b| (raw[a] - z).norm().total_cmp(&(raw[b] - z).norm())).unwrap_or(0);
    roots.sort_by_key(|r| key(r.0));
    roots
}

/// Newton on the `(m-1)`-th derivative, where an `m`-fold root is simple.
fn polish_multiple(p: &[Complex64], z0: Complex64, m: usize) -> Complex64 {
    let mut q = p.to_vec();
    for _ in 1..m {
        q = derivative(&q);
    }
    let dq = derivative(&q);
    let mut z = z0;
    for _ in 0..4 {
        let d = eval(&dq, z);
        if d == ZERO {
            break;
        }
        let next = z - eval(&q, z) / d;
        if eval(&q, next).norm() <= eval(&q, z).norm() {
            z = next;
        } else {
            break;
        }
    }
    z
}
