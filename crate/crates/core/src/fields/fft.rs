//! Multidimensional complex FFT assembled from 1D `rustfft` transforms.
//!
//! Forward transforms carry the `1/N` normalization (N = total point count),
//! so the output coefficients are Fourier-series coefficients of the sampled
//! periodic function. Inverse transforms are unnormalized sums.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::sync::Arc;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

fn plan(len: usize, dir: Direction) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        match dir {
            Direction::Forward => p.plan_fft_forward(len),
            Direction::Inverse => p.plan_fft_inverse(len),
        }
    })
}

/// In-place transform of a row-major array with the given axis lengths.
pub fn fft_nd(data: &mut [Complex64], dims: &[usize], dir: Direction) {
    let total: usize = dims.iter().product();
    assert_eq!(data.len(), total, "buffer length does not match dims");
    let rank = dims.len();
    for axis in 0..rank {
        let len = dims[axis];
        if len == 1 {
            continue;
        }
        let fft = plan(len, dir);
        let stride: usize = dims[axis + 1..].iter().product();
        if stride == 1 {
            let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
            fft.process_with_scratch(data, &mut scratch);
            continue;
        }
        // Batch lines that share the outer index so the gather walks memory
        // in contiguous runs of `stride`.
        let outer = total / (len * stride);
        let mut block = vec![Complex64::default(); len * stride];
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        for o in 0..outer {
            let base = o * len * stride;
            for k in 0..len {
                let src = &data[base + k * stride..base + (k + 1) * stride];
                for (s, v) in src.iter().enumerate() {
                    block[s * len + k] = *v;
                }
            }
            fft.process_with_scratch(&mut block, &mut scratch);
            for k in 0..len {
                let dst = &mut data[base + k * stride..base + (k + 1) * stride];
                for (s, v) in dst.iter_mut().enumerate() {
                    *v = block[s * len + k];
                }
            }
        }
    }
    if dir == Direction::Forward {
        let scale = 1.0 / total as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}

/// Forward transform of real samples.
pub fn forward_real(values: &[f64], dims: &[usize]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_nd(&mut buf, dims, Direction::Forward);
    buf
}

/// Inverse transform returning the real part and the largest imaginary residue.
pub fn inverse_real(coeffs: &[Complex64], dims: &[usize]) -> (Vec<f64>, f64) {
    let mut buf = coeffs.to_vec();
    fft_nd(&mut buf, dims, Direction::Inverse);
    let mut max_imag = 0.0f64;
    let out = buf
        .iter()
        .map(|c| {
            max_imag = max_imag.max(c.im.abs());
            c.re
        })
        .collect();
    (out, max_imag)
}
