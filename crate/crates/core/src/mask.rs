use crate::types::Mask;

/// Chebyshev dilation: a pixel is excluded iff an excluded pixel of `mask`
/// lies within `radius` along both axes.
///
/// The square ball is separable, so this is a running-max along rows then
/// along columns.
pub fn dilate_mask(mask: &Mask, radius: usize) -> Mask {
    if radius == 0 {
        return mask.clone();
    }
    let (w, h) = mask.dims();
    let src = mask.data();

    let mut horizontal = vec![false; w * h];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        let out = &mut horizontal[y * w..(y + 1) * w];
        dilate_line(row.iter().copied(), w, radius, |i, v| out[i] = v);
    }

    let mut data = vec![false; w * h];
    for x in 0..w {
        let column = (0..h).map(|y| horizontal[y * w + x]);
        dilate_line(column, h, radius, |i, v| data[i * w + x] = v);
    }
    Mask::new(w, h, data).expect("dimensions preserved")
}

fn dilate_line(
    line: impl Iterator<Item = bool>,
    len: usize,
    radius: usize,
    mut write: impl FnMut(usize, bool),
) {
    // Distance to the most recent excluded sample on each side.
    let values: Vec<bool> = line.collect();
    let mut last: Option<usize> = None;
    let mut from_left = vec![false; len];
    for (i, &v) in values.iter().enumerate() {
        if v {
            last = Some(i);
        }
        from_left[i] = matches!(last, Some(j) if i - j <= radius);
    }
    let mut next: Option<usize> = None;
    for i in (0..len).rev() {
        if values[i] {
            next = Some(i);
        }
        let right = matches!(next, Some(j) if j - i <= radius);
        write(i, from_left[i] || right);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(mask: &Mask, r: usize) -> Mask {
        let (w, h) = mask.dims();
        Mask::from_fn(w, h, |x, y| {
            let x0 = x.saturating_sub(r);
            let y0 = y.saturating_sub(r);
            (y0..=(y + r).min(h - 1))
                .any(|yy| (x0..=(x + r).min(w - 1)).any(|xx| mask.is_excluded(xx, yy)))
        })
        .unwrap()
    }

    #[test]
    fn radius_zero_is_identity() {
        let m = Mask::rectangle(8, 6, 2, 1, 4, 3).unwrap();
        assert_eq!(dilate_mask(&m, 0), m);
    }

    #[test]
    fn single_pixel_grows_to_block() {
        let m = Mask::rectangle(9, 9, 4, 4, 5, 5).unwrap();
        let d = dilate_mask(&m, 2);
        assert_eq!(d, Mask::rectangle(9, 9, 2, 2, 7, 7).unwrap());
        assert_eq!(d.excluded_count(), 25);

        let corner = Mask::rectangle(9, 9, 0, 0, 1, 1).unwrap();
        assert_eq!(dilate_mask(&corner, 2).excluded_count(), 9);
    }

    #[test]
    fn empty_mask_stays_empty() {
        let m = Mask::empty(7, 5).unwrap();
        assert_eq!(dilate_mask(&m, 3).excluded_count(), 0);
    }

    fn arb_mask() -> impl Strategy<Value = Mask> {
        (1usize..12, 1usize..12).prop_flat_map(|(w, h)| {
            proptest::collection::vec(proptest::bool::weighted(0.1), w * h)
                .prop_map(move |d| Mask::new(w, h, d).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn matches_brute_force(m in arb_mask(), r in 0usize..5) {
            prop_assert_eq!(dilate_mask(&m, r), brute(&m, r));
        }

        #[test]
        fn composition_is_additive(m in arb_mask(), r1 in 0usize..4, r2 in 0usize..4) {
            let d1 = dilate_mask(&m, r1);
            prop_assert!(m.is_subset_of(&d1));
            prop_assert_eq!(dilate_mask(&d1, r2), dilate_mask(&m, r1 + r2));
        }
    }
}
