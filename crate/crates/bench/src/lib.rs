//! Fixtures shared by the benchmarks.

use lambda_abel::{BiSeries, Chart, Mat2, MatrixConnection, SpectralCurve, Truncation};

pub fn companion_curve(n: i64) -> SpectralCurve {
    SpectralCurve::from_ints(n, &[0], &[0, -1]).expect("valid curve")
}

/// `[[0, z], [1, 0]]` at the given window.
pub fn companion(n: i64, l: usize) -> MatrixConnection {
    let tr = Truncation::new(n, l, 0).expect("valid window");
    let s =
        |cs: &[((usize, i64), i64)]| BiSeries::from_ints(tr, Chart::Base, cs).expect("in window");
    MatrixConnection::new(
        Mat2::new(s(&[]), s(&[((0, 1), 1)]), s(&[((0, 0), 1)]), s(&[])),
        Some(companion_curve(n)),
    )
    .expect("valid connection")
}

/// A unit power series with every coefficient of the window filled in.
pub fn dense_unit(n: i64, l: usize) -> BiSeries {
    let tr = Truncation::new(n, l, 0).expect("valid window");
    let cs: Vec<_> = (0..l)
        .flat_map(|i| {
            (0..n).map(move |j| {
                (
                    (i, j),
                    if i + j as usize == 0 {
                        1
                    } else {
                        (i as i64 + 2 * j) % 5 - 2
                    },
                )
            })
        })
        .collect();
    BiSeries::from_ints(tr, Chart::Base, &cs).expect("in window")
}
