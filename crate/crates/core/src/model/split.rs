use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::rng::shuffled_indices;

/// `ceil(n * fraction)` computed exactly for the binary value of `fraction`.
pub fn test_count(n: usize, fraction: f64) -> usize {
    let nf = n as f64;
    let x = nf * fraction;
    let k = x.ceil();
    // The rounded product can only land on an integer the exact product
    // exceeds; a fused multiply-add recovers the sign of the residual.
    if x == k && fraction.mul_add(nf, -k) > 0.0 {
        k as usize + 1
    } else {
        k as usize
    }
}

/// Seeded shuffle of row indices; the first `ceil(n * test_fraction)`
/// shuffled rows form the test part. Both parts keep shuffled order.
pub fn train_test_split(
    frame: &Frame,
    target: &str,
    test_fraction: f64,
    seed: u64,
) -> Result<(Frame, Frame)> {
    frame.column(target)?;
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "test fraction must lie in (0, 1), got {test_fraction}"
        )));
    }
    let order = shuffled_indices(frame.n_rows(), seed);
    let n_test = test_count(frame.n_rows(), test_fraction);
    let (test, train) = order.split_at(n_test);
    Ok((frame.take_rows(train), frame.take_rows(test)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Column;

    #[test]
    fn ceil_sizes() {
        assert_eq!(test_count(95_662, 0.3), 28_699);
        assert_eq!(test_count(10, 0.3), 3);
        assert_eq!(test_count(10, 0.5), 5);
        assert_eq!(test_count(3, 0.1), 1);
        // 0.7 is slightly below 7/10 in binary, so 10 * 0.7 rounds up to
        // exactly 7 while the true product is just under it.
        assert_eq!(test_count(10, 0.7), 7);
    }

    #[test]
    fn deterministic_partition() {
        let f = Frame::new(vec![Column::int("y", (0..10).map(Some).collect())]).unwrap();
        let (train, test) = train_test_split(&f, "y", 0.3, 2).unwrap();
        assert_eq!((train.n_rows(), test.n_rows()), (7, 3));
        assert_eq!(
            (train.clone(), test.clone()),
            train_test_split(&f, "y", 0.3, 2).unwrap()
        );
        assert_eq!(
            train_test_split(&f, "nope", 0.3, 2),
            Err(Error::UnknownColumn("nope".into()))
        );
        assert!(train_test_split(&f, "y", 1.0, 2).is_err());
    }
}
