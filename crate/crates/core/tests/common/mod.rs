//! Reference implementations used to cross-check the library.
//!
//! Everything here is deliberately naive: exhaustive enumeration and direct
//! numeric integration, sharing no code with the crate under test.

#![allow(dead_code)]

use eqpolar::Kernel;

/// Generator matrix `F^{(x)n}` of the binary polar transform with
/// `F = [[1, 0], [1, 1]]`, row-major, no bit reversal.
pub fn gf2_polar_matrix(n: usize) -> Vec<Vec<u8>> {
    let mut g = vec![vec![1u8]];
    for _ in 0..n {
        let size = g.len();
        let mut next = vec![vec![0u8; 2 * size]; 2 * size];
        for (r, row) in g.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                next[r][c] = v;
                next[r + size][c] = v;
                next[r + size][c + size] = v;
            }
        }
        g = next;
    }
    g
}

/// Row vector times matrix over GF(2).
pub fn gf2_encode(u: &[usize], g: &[Vec<u8>]) -> Vec<usize> {
    let len = u.len();
    (0..len)
        .map(|c| (0..len).map(|r| u[r] * g[r][c] as usize).sum::<usize>() % 2)
        .collect()
}

/// Encoder written straight from the butterfly description, recursing on the
/// channel-side stage: the last stage pairs position `p` with `p + N/2`.
pub fn encode_recursive(u: &[usize], stages: &[Kernel]) -> Vec<usize> {
    if stages.is_empty() {
        return u.to_vec();
    }
    let (inner, last) = stages.split_at(stages.len() - 1);
    let half = u.len() / 2;
    // Inner stages act independently on the two contiguous halves.
    let mut v = encode_recursive(&u[..half], inner);
    v.extend(encode_recursive(&u[half..], inner));
    for p in 0..half {
        v[p] = last[0].apply(v[p], v[p + half]);
    }
    v
}

/// Enumerates all `q^len` words in lexicographic order.
pub fn all_words(q: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = q.pow(len as u32);
    (0..total).map(move |mut idx| {
        let mut w = vec![0; len];
        for slot in w.iter_mut().rev() {
            *slot = idx % q;
            idx /= q;
        }
        w
    })
}

/// Successive-cancellation by brute force: index `i` is decided from
/// `P(u_i | y, u_0..u_{i-1})`, obtained by summing the channel likelihood of
/// every codeword that extends the already decided prefix. Frozen indices
/// decide 0. Returns the decisions and the normalized posteriors.
pub fn brute_force_sc(
    channel: &[Vec<f64>],
    frozen: &[bool],
    encode: impl Fn(&[usize]) -> Vec<usize>,
    q: usize,
) -> (Vec<usize>, Vec<Vec<f64>>) {
    let len = channel.len();
    let table: Vec<(Vec<usize>, f64)> = all_words(q, len)
        .map(|u| {
            let x = encode(&u);
            let w: f64 = x.iter().zip(channel).map(|(&s, row)| row[s]).product();
            (u, w)
        })
        .collect();
    let mut decided: Vec<usize> = Vec::with_capacity(len);
    let mut posteriors = Vec::with_capacity(len);
    for i in 0..len {
        let mut mass = vec![0.0; q];
        for (u, w) in &table {
            if u[..i] == decided[..] {
                mass[u[i]] += w;
            }
        }
        let total: f64 = mass.iter().sum();
        mass.iter_mut().for_each(|m| *m /= total);
        let pick = if frozen[i] {
            0
        } else {
            let mut best = 0;
            for a in 1..q {
                if mass[a] > mass[best] {
                    best = a;
                }
            }
            best
        };
        decided.push(pick);
        posteriors.push(mass);
    }
    (decided, posteriors)
}

fn std_normal_pdf(t: f64) -> f64 {
    (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `Q(x)` by composite Simpson integration of the normal density over
/// `[0, |x|]`, with a panel width of at most `h`.
pub fn q_by_integration(x: f64, h: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 {
        return 0.5;
    }
    let mut panels = (a / h).ceil() as usize;
    if panels % 2 == 1 {
        panels += 1;
    }
    let step = a / panels as f64;
    let mut acc = std_normal_pdf(0.0) + std_normal_pdf(a);
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * std_normal_pdf(k as f64 * step);
    }
    let integral = acc * step / 3.0;
    if x > 0.0 {
        0.5 - integral
    } else {
        0.5 + integral
    }
}

/// Expected good-channel error probability bound from an explicit list of
/// competitor distances, using the integrated `Q`.
pub fn union_bound_direct(distances: &[f64], snr_linear: f64) -> f64 {
    distances
        .iter()
        .map(|d| q_by_integration(d * (snr_linear / 2.0).sqrt(), 1e-3))
        .sum()
}
