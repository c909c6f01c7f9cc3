//! Shared test oracles.

use nalgebra::DMatrix;
use nhscatter::BandedOperator;

/// Diagonal metric of a small truncated Hamiltonian by brute force: the null
/// vector of the bond equations `conj(H_ji) theta_j - theta_i H_ij = 0`,
/// scaled so its largest entry is one.
pub fn brute_force_metric(h: &BandedOperator) -> Vec<f64> {
    let w = *h.window();
    let n = w.len();
    assert!(n <= 15, "oracle is meant for small windows");
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for i in w.sites() {
        for j in [i - 1, i + 1] {
            if !w.contains(j) {
                continue;
            }
            let (ii, jj) = (w.index(i).unwrap(), w.index(j).unwrap());
            let (hij, hji) = (h.get(i, j), h.get(j, i).conj());
            let mut re = vec![0.0; n];
            let mut im = vec![0.0; n];
            re[jj] += hji.re;
            re[ii] -= hij.re;
            im[jj] += hji.im;
            im[ii] -= hij.im;
            rows.push(re);
            rows.push(im);
        }
    }
    let a = DMatrix::from_fn(rows.len(), n, |r, c| rows[r][c]);
    let svd = a.svd(false, true);
    let v_t = svd.v_t.unwrap();
    let k = svd.singular_values.imin();
    let null: Vec<f64> = v_t.row(k).iter().copied().collect();
    let peak = null
        .iter()
        .copied()
        .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    null.iter().map(|x| x / peak).collect()
}

/// `theta` scaled so its largest entry is one.
pub fn unit_peak(theta: &[f64]) -> Vec<f64> {
    let peak = theta.iter().copied().fold(0.0f64, f64::max);
    theta.iter().map(|x| x / peak).collect()
}
