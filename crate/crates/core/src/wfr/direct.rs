//! Literal double-summation evaluator, used as the reference for the FFT path.

use num_complex::Complex64;

use super::engine::check_fits;
use super::window::{make_window, WindowSpec};
use super::Spectrogram;
use crate::error::Result;
use crate::types::Image;

/// Mirror an out-of-range coordinate back into `0..n` by repeated bouncing
/// off the first and last sample.
fn bounce(mut i: isize, n: usize) -> usize {
    let last = n as isize - 1;
    if last == 0 {
        return 0;
    }
    loop {
        if i < 0 {
            i = -i;
        } else if i > last {
            i = 2 * last - i;
        } else {
            return i as usize;
        }
    }
}

/// `S(u, v; ξ, η) = Σ_{x,y} I(x, y)·w(x - u, y - v)·exp(-i(ξx + ηy))` summed
/// term by term over the reflection-extended image. O(W·H·(2R+1)²).
pub fn wft_eval_direct(image: &Image, spec: &WindowSpec, xi: f64, eta: f64) -> Result<Spectrogram> {
    check_fits(image, spec)?;
    let window = make_window(spec)?;
    let (w, h) = image.dims();
    let r = spec.radius as isize;

    // exp(-iξx) for every extended coordinate x in -R..W+R.
    let phase_x: Vec<Complex64> = (-r..w as isize + r)
        .map(|x| Complex64::from_polar(1.0, -xi * x as f64))
        .collect();
    let phase_y: Vec<Complex64> = (-r..h as isize + r)
        .map(|y| Complex64::from_polar(1.0, -eta * y as f64))
        .collect();

    let mut data = Vec::with_capacity(w * h);
    for v in 0..h as isize {
        for u in 0..w as isize {
            let mut acc = Complex64::new(0.0, 0.0);
            for y in v - r..=v + r {
                let row = image.row(bounce(y, h));
                let fy = phase_y[(y + r) as usize];
                let mut line = Complex64::new(0.0, 0.0);
                for x in u - r..=u + r {
                    let weight = window.at(x - u, y - v);
                    line += row[bounce(x, w)] * weight * phase_x[(x + r) as usize];
                }
                acc += line * fy;
            }
            data.push(acc);
        }
    }
    Ok(Spectrogram {
        width: w,
        height: h,
        xi,
        eta,
        data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounce_matches_reflect_101() {
        let v: Vec<usize> = (-4..9).map(|i| bounce(i, 5)).collect();
        assert_eq!(v, vec![4, 3, 2, 1, 0, 1, 2, 3, 4, 3, 2, 1, 0]);
    }

    #[test]
    fn delta_image_sifts_the_window() {
        let spec = WindowSpec::with_radius(1.5, 1.5, 3).unwrap();
        let (cx, cy) = (8usize, 7usize);
        let img = Image::from_fn(17, 15, |x, y| if (x, y) == (cx, cy) { 1.0 } else { 0.0 }).unwrap();
        let (xi, eta) = (0.6, -0.25);
        let s = wft_eval_direct(&img, &spec, xi, eta).unwrap();
        let window = make_window(&spec).unwrap();
        let carrier = Complex64::from_polar(1.0, -(xi * cx as f64 + eta * cy as f64));
        for v in 0..15 {
            for u in 0..17 {
                let expect = window.at(cx as isize - u as isize, cy as isize - v as isize) * carrier;
                assert!((s.get(u, v) - expect).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn zero_image() {
        let spec = WindowSpec::with_radius(1.0, 1.0, 2).unwrap();
        let img = Image::constant(8, 8, 0.0).unwrap();
        let s = wft_eval_direct(&img, &spec, 0.7, 0.0).unwrap();
        assert!(s.data.iter().all(|c| c.norm() == 0.0));
    }
}
