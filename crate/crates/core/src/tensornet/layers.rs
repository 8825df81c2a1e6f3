//! Single-example layer kernels. Volumes are `[C, N, N, N]` row-major.
//!
//! Convolution work is split across output channels (forward, weight
//! gradient) or input channels (input gradient); each output element is
//! accumulated by one thread in a fixed order, so results do not depend on
//! the thread count.

use rayon::prelude::*;

use super::spec::PoolMode;

const K: usize = 3;

/// Valid output range along one axis for kernel offset `d ∈ {-1, 0, 1}`.
#[inline]
fn span(n: usize, d: isize) -> (usize, usize) {
    match d {
        -1 => (1, n),
        1 => (0, n - 1),
        _ => (0, n),
    }
}

#[inline]
fn shift(i: usize, d: isize) -> usize {
    (i as isize + d) as usize
}

pub fn conv3d_forward(
    input: &[f64],
    in_channels: usize,
    side: usize,
    weight: &[f64],
    bias: &[f64],
) -> Vec<f64> {
    let n = side;
    let n3 = n * n * n;
    let filters = bias.len();
    let mut out = vec![0.0; filters * n3];
    out.par_chunks_mut(n3).enumerate().for_each(|(f, out_f)| {
        out_f.fill(bias[f]);
        for c in 0..in_channels {
            let inp = &input[c * n3..(c + 1) * n3];
            for kz in 0..K {
                let dz = kz as isize - 1;
                let (z0, z1) = span(n, dz);
                for ky in 0..K {
                    let dy = ky as isize - 1;
                    let (y0, y1) = span(n, dy);
                    for kx in 0..K {
                        let dx = kx as isize - 1;
                        let (x0, x1) = span(n, dx);
                        let w = weight[(((f * in_channels + c) * K + kz) * K + ky) * K + kx];
                        for z in z0..z1 {
                            for y in y0..y1 {
                                let o = (z * n + y) * n;
                                let i = (shift(z, dz) * n + shift(y, dy)) * n;
                                let dst = &mut out_f[o + x0..o + x1];
                                let src = &inp[i + shift(x0, dx)..i + shift(x1 - 1, dx) + 1];
                                for (d, s) in dst.iter_mut().zip(src) {
                                    *d += w * s;
                                }
                            }
                        }
                    }
                }
            }
        }
    });
    out
}

/// Returns `(grad_input, grad_weight, grad_bias)`.
pub fn conv3d_backward(
    input: &[f64],
    in_channels: usize,
    side: usize,
    weight: &[f64],
    grad_out: &[f64],
    filters: usize,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let n = side;
    let n3 = n * n * n;
    let per_filter = in_channels * K * K * K;

    let mut grad_w = vec![0.0; filters * per_filter];
    grad_w
        .par_chunks_mut(per_filter)
        .enumerate()
        .for_each(|(f, gw)| {
            let g = &grad_out[f * n3..(f + 1) * n3];
            for c in 0..in_channels {
                let inp = &input[c * n3..(c + 1) * n3];
                for kz in 0..K {
                    let dz = kz as isize - 1;
                    let (z0, z1) = span(n, dz);
                    for ky in 0..K {
                        let dy = ky as isize - 1;
                        let (y0, y1) = span(n, dy);
                        for kx in 0..K {
                            let dx = kx as isize - 1;
                            let (x0, x1) = span(n, dx);
                            let mut acc = 0.0;
                            for z in z0..z1 {
                                for y in y0..y1 {
                                    let o = (z * n + y) * n;
                                    let i = (shift(z, dz) * n + shift(y, dy)) * n;
                                    let a = &g[o + x0..o + x1];
                                    let b = &inp[i + shift(x0, dx)..i + shift(x1 - 1, dx) + 1];
                                    acc += a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
                                }
                            }
                            gw[((c * K + kz) * K + ky) * K + kx] = acc;
                        }
                    }
                }
            }
        });

    let grad_b: Vec<f64> = (0..filters)
        .map(|f| grad_out[f * n3..(f + 1) * n3].iter().sum())
        .collect();

    let mut grad_in = vec![0.0; in_channels * n3];
    grad_in.par_chunks_mut(n3).enumerate().for_each(|(c, gi)| {
        for f in 0..filters {
            let g = &grad_out[f * n3..(f + 1) * n3];
            for kz in 0..K {
                let dz = kz as isize - 1;
                let (z0, z1) = span(n, dz);
                for ky in 0..K {
                    let dy = ky as isize - 1;
                    let (y0, y1) = span(n, dy);
                    for kx in 0..K {
                        let dx = kx as isize - 1;
                        let (x0, x1) = span(n, dx);
                        let w = weight[(((f * in_channels + c) * K + kz) * K + ky) * K + kx];
                        for z in z0..z1 {
                            for y in y0..y1 {
                                let o = (z * n + y) * n;
                                let i = (shift(z, dz) * n + shift(y, dy)) * n;
                                let src = &g[o + x0..o + x1];
                                let dst = &mut gi[i + shift(x0, dx)..i + shift(x1 - 1, dx) + 1];
                                for (d, s) in dst.iter_mut().zip(src) {
                                    *d += w * s;
                                }
                            }
                        }
                    }
                }
            }
        }
    });
    (grad_in, grad_w, grad_b)
}

/// Pools each `kernel³` window. For max pooling also returns, per output,
/// the input index of the first maximal element in scan order.
pub fn pool_forward(
    input: &[f64],
    channels: usize,
    side: usize,
    mode: PoolMode,
    kernel: usize,
) -> (Vec<f64>, Option<Vec<usize>>) {
    let n = side;
    let m = side / kernel;
    let mut out = vec![0.0; channels * m * m * m];
    let mut arg = match mode {
        PoolMode::Max => Some(vec![0usize; out.len()]),
        PoolMode::Average => None,
    };
    let norm = (kernel * kernel * kernel) as f64;
    for c in 0..channels {
        for z in 0..m {
            for y in 0..m {
                for x in 0..m {
                    let o = ((c * m + z) * m + y) * m + x;
                    let mut best = f64::NEG_INFINITY;
                    let mut best_i = 0;
                    let mut sum = 0.0;
                    for a in 0..kernel {
                        for b in 0..kernel {
                            for d in 0..kernel {
                                let i = ((c * n + z * kernel + a) * n + y * kernel + b) * n
                                    + x * kernel
                                    + d;
                                let v = input[i];
                                sum += v;
                                if v > best {
                                    best = v;
                                    best_i = i;
                                }
                            }
                        }
                    }
                    match mode {
                        PoolMode::Max => {
                            out[o] = best;
                            arg.as_mut().unwrap()[o] = best_i;
                        }
                        PoolMode::Average => out[o] = sum / norm,
                    }
                }
            }
        }
    }
    (out, arg)
}

pub fn pool_backward(
    grad_out: &[f64],
    channels: usize,
    side: usize,
    mode: PoolMode,
    kernel: usize,
    argmax: Option<&[usize]>,
) -> Vec<f64> {
    let n = side;
    let m = side / kernel;
    let mut grad_in = vec![0.0; channels * n * n * n];
    match mode {
        PoolMode::Max => {
            let arg = argmax.expect("max pooling backward needs argmax");
            for (o, &i) in arg.iter().enumerate() {
                grad_in[i] += grad_out[o];
            }
        }
        PoolMode::Average => {
            let norm = (kernel * kernel * kernel) as f64;
            for c in 0..channels {
                for z in 0..m {
                    for y in 0..m {
                        for x in 0..m {
                            let g = grad_out[((c * m + z) * m + y) * m + x] / norm;
                            for a in 0..kernel {
                                for b in 0..kernel {
                                    for d in 0..kernel {
                                        let i = ((c * n + z * kernel + a) * n + y * kernel + b)
                                            * n
                                            + x * kernel
                                            + d;
                                        grad_in[i] += g;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    grad_in
}

/// `out = W·x + b` with `W` shaped `[outputs, inputs]`.
pub fn fc_forward(input: &[f64], weight: &[f64], bias: &[f64]) -> Vec<f64> {
    let inputs = input.len();
    bias.iter()
        .enumerate()
        .map(|(o, b)| {
            b + weight[o * inputs..(o + 1) * inputs]
                .iter()
                .zip(input)
                .map(|(w, x)| w * x)
                .sum::<f64>()
        })
        .collect()
}

/// Returns `(grad_input, grad_weight, grad_bias)`.
pub fn fc_backward(input: &[f64], weight: &[f64], grad_out: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let inputs = input.len();
    let mut grad_w = vec![0.0; weight.len()];
    let mut grad_in = vec![0.0; inputs];
    for (o, &g) in grad_out.iter().enumerate() {
        let row = &weight[o * inputs..(o + 1) * inputs];
        for ((gw, x), (gi, w)) in grad_w[o * inputs..(o + 1) * inputs]
            .iter_mut()
            .zip(input)
            .zip(grad_in.iter_mut().zip(row))
        {
            *gw = g * x;
            *gi += w * g;
        }
    }
    (grad_in, grad_w, grad_out.to_vec())
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.iter().map(|e| e / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Direct zero-padded convolution, one output element at a time.
    fn conv_oracle(input: &[f64], c_in: usize, n: usize, w: &[f64], b: &[f64]) -> Vec<f64> {
        let f_out = b.len();
        let mut out = vec![0.0; f_out * n * n * n];
        for f in 0..f_out {
            for z in 0..n as isize {
                for y in 0..n as isize {
                    for x in 0..n as isize {
                        let mut acc = b[f];
                        for c in 0..c_in {
                            for kz in 0..3isize {
                                for ky in 0..3isize {
                                    for kx in 0..3isize {
                                        let (iz, iy, ix) = (z + kz - 1, y + ky - 1, x + kx - 1);
                                        if iz < 0 || iy < 0 || ix < 0 {
                                            continue;
                                        }
                                        let (iz, iy, ix) = (iz as usize, iy as usize, ix as usize);
                                        if iz >= n || iy >= n || ix >= n {
                                            continue;
                                        }
                                        let wv = w[(((f * c_in + c) * 3 + kz as usize) * 3
                                            + ky as usize)
                                            * 3
                                            + kx as usize];
                                        acc += wv * input[((c * n + iz) * n + iy) * n + ix];
                                    }
                                }
                            }
                        }
                        out[((f * n + z as usize) * n + y as usize) * n + x as usize] = acc;
                    }
                }
            }
        }
        out
    }

    fn random(len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    #[test]
    fn identity_kernel_reproduces_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let input = random(64, &mut rng);
        let mut w = vec![0.0; 27];
        w[13] = 1.0;
        let out = conv3d_forward(&input, 1, 4, &w, &[0.0]);
        assert_eq!(out, input);
    }

    #[test]
    fn conv_matches_direct_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (c_in, f_out, n) = (3, 2, 5);
        let input = random(c_in * n * n * n, &mut rng);
        let w = random(f_out * c_in * 27, &mut rng);
        let b = random(f_out, &mut rng);
        let fast = conv3d_forward(&input, c_in, n, &w, &b);
        let slow = conv_oracle(&input, c_in, n, &w, &b);
        assert_eq!(fast.len(), slow.len());
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn conv_backward_is_adjoint() {
        // <conv(x), g> is linear in x and w, so its gradients are exact
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (c_in, f_out, n) = (2, 3, 4);
        let x = random(c_in * n * n * n, &mut rng);
        let w = random(f_out * c_in * 27, &mut rng);
        let g = random(f_out * n * n * n, &mut rng);
        let zero_b = vec![0.0; f_out];
        let (gx, gw, gb) = conv3d_backward(&x, c_in, n, &w, &g, f_out);
        let y = conv3d_forward(&x, c_in, n, &w, &zero_b);
        let lhs: f64 = y.iter().zip(&g).map(|(a, b)| a * b).sum();
        let via_x: f64 = gx.iter().zip(&x).map(|(a, b)| a * b).sum();
        let via_w: f64 = gw.iter().zip(&w).map(|(a, b)| a * b).sum();
        assert!((lhs - via_x).abs() < 1e-10);
        assert!((lhs - via_w).abs() < 1e-10);
        let sums: Vec<f64> = (0..f_out).map(|f| g[f * 64..(f + 1) * 64].iter().sum()).collect();
        assert_eq!(gb, sums);
    }

    #[test]
    fn conv_preserves_side() {
        let out = conv3d_forward(&vec![1.0; 2 * 6 * 6 * 6], 2, 6, &vec![0.1; 4 * 2 * 27], &[0.0; 4]);
        assert_eq!(out.len(), 4 * 6 * 6 * 6);
    }

    #[test]
    fn max_pool_of_counting_block() {
        let input: Vec<f64> = (1..=8).map(|v| v as f64).collect();
        let (out, arg) = pool_forward(&input, 1, 2, PoolMode::Max, 2);
        assert_eq!(out, vec![8.0]);
        assert_eq!(arg.unwrap(), vec![7]);
        let (avg, _) = pool_forward(&input, 1, 2, PoolMode::Average, 2);
        assert_eq!(avg, vec![4.5]);
    }

    #[test]
    fn max_pool_ignores_window_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let mut window = random(8, &mut rng);
            let (a, _) = pool_forward(&window, 1, 2, PoolMode::Max, 2);
            window.reverse();
            window.rotate_left(3);
            let (b, _) = pool_forward(&window, 1, 2, PoolMode::Max, 2);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn average_pool_is_window_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let input = random(2 * 4 * 4 * 4, &mut rng);
        let (out, _) = pool_forward(&input, 2, 4, PoolMode::Average, 4);
        for c in 0..2 {
            let mean = input[c * 64..(c + 1) * 64].iter().sum::<f64>() / 64.0;
            assert_eq!(out[c], mean);
        }
    }

    #[test]
    fn pool_backward_routes_gradient() {
        let input: Vec<f64> = (1..=8).map(|v| v as f64).collect();
        let (_, arg) = pool_forward(&input, 1, 2, PoolMode::Max, 2);
        let g = pool_backward(&[2.0], 1, 2, PoolMode::Max, 2, arg.as_deref());
        assert_eq!(g, vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0]);
        let g = pool_backward(&[8.0], 1, 2, PoolMode::Average, 2, None);
        assert_eq!(g, vec![1.0; 8]);
    }

    #[test]
    fn fc_backward_matches_definition() {
        let x = [1.0, -2.0, 0.5];
        let w = [0.1, 0.2, 0.3, -0.4, 0.5, -0.6];
        let out = fc_forward(&x, &w, &[1.0, -1.0]);
        assert!((out[0] - (1.0 + 0.1 - 0.4 + 0.15)).abs() < 1e-15);
        let (gx, gw, gb) = fc_backward(&x, &w, &[1.0, 2.0]);
        assert_eq!(gb, vec![1.0, 2.0]);
        assert_eq!(gw, vec![1.0, -2.0, 0.5, 2.0, -4.0, 1.0]);
        assert!((gx[0] - (0.1 - 0.8)).abs() < 1e-15);
    }

    #[test]
    fn softmax_sums_to_one() {
        let p = softmax(&[1000.0, -1000.0]);
        assert_eq!(p, vec![1.0, 0.0]);
        let p = softmax(&[0.3, -1.2]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
