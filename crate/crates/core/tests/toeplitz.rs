use nalgebra::DMatrix;
use nlfem::gentensor::{assemble_generating_tensor, classical_generating_tensor, closed_form_table_2d, GeneratingTensor, QuadConfig};
use nlfem::kernel::{make_kernel, Normalization};
use nlfem::toeplitz::{build_operator, fft_size, materialize_dense, write_dense_csv, Workspace};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

fn random_tensor(d: usize, band: usize, rng: &mut StdRng) -> GeneratingTensor {
    let entries = (0..band.pow(d as u32)).map(|_| rng.random::<f64>() - 0.5).collect();
    // entries need not be permutation symmetric for the Toeplitz structure itself
    GeneratingTensor::from_entries(d, 8, band, 1.0, None, entries).unwrap()
}

fn rel_inf(a: &[f64], b: &[f64]) -> f64 {
    let num = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    let den = b.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    num / den
}

fn dense_apply(m: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (m * nalgebra::DVector::from_column_slice(v)).as_slice().to_vec()
}

#[test]
fn identity_from_impulse() {
    for dims in [vec![5, 7], vec![3, 4, 2], vec![6]] {
        let d = dims.len();
        let mut e = vec![0.0; 2usize.pow(d as u32)];
        e[0] = 1.0;
        let g = GeneratingTensor::from_entries(d, 4, 2, 1.0, None, e).unwrap();
        let op = build_operator(&g, &dims).unwrap();
        let v: Vec<f64> = (0..op.len()).map(|i| (i as f64 * 0.37).sin()).collect();
        let y = op.matvec(&v).unwrap();
        assert!(rel_inf(&y, &v) < 1e-14);
    }
}

#[test]
fn zero_vector() {
    let g = classical_generating_tensor(2, 0.1).unwrap();
    let op = build_operator(&g, &[6, 5]).unwrap();
    assert!(op.matvec(&vec![0.0; 30]).unwrap().iter().all(|&v| v == 0.0));
}

#[test]
fn fft_matches_dense_random() {
    let mut rng = StdRng::seed_from_u64(7);
    for (dims, band) in [(vec![8, 8], 5), (vec![4, 4, 4], 3), (vec![8, 8], 8), (vec![3, 5, 4], 4), (vec![7, 2], 2)] {
        let g = random_tensor(dims.len(), band, &mut rng);
        let op = build_operator(&g, &dims).unwrap();
        let dense = materialize_dense(&g, &dims).unwrap();
        for _ in 0..5 {
            let v: Vec<f64> = (0..op.len()).map(|_| rng.random::<f64>() - 0.5).collect();
            let y = op.matvec(&v).unwrap();
            assert!(rel_inf(&y, &dense_apply(&dense, &v)) <= 1e-12);
        }
    }
}

#[test]
fn workspace_reuse_is_bitwise_stable() {
    let mut rng = StdRng::seed_from_u64(3);
    let g = random_tensor(2, 4, &mut rng);
    let op = build_operator(&g, &[9, 6]).unwrap();
    let v: Vec<f64> = (0..op.len()).map(|_| rng.random::<f64>()).collect();
    let mut ws = Workspace::default();
    let mut a = vec![0.0; op.len()];
    let mut b = vec![0.0; op.len()];
    op.matvec_into(&v, &mut a, &mut ws).unwrap();
    op.matvec_into(&v, &mut b, &mut ws).unwrap();
    assert_eq!(a, b);
    assert!(op.matvec(&v[1..]).is_err());
}

#[test]
fn concurrent_matvecs_agree() {
    let mut rng = StdRng::seed_from_u64(11);
    let g = random_tensor(3, 3, &mut rng);
    let op = build_operator(&g, &[5, 4, 6]).unwrap();
    let v: Vec<f64> = (0..op.len()).map(|_| rng.random::<f64>()).collect();
    let serial = op.matvec(&v).unwrap();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..4).map(|_| s.spawn(|| op.matvec(&v).unwrap())).collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), serial);
        }
    });
}

#[test]
fn small_dense_layout() {
    let g = GeneratingTensor::from_entries(2, 2, 2, 1.0, None, vec![1.0, 2.0, 2.0, 3.0]).unwrap();
    let m = materialize_dense(&g, &[2, 2]).unwrap();
    let (a, b, c) = (1.0, 2.0, 3.0);
    let expect = DMatrix::from_row_slice(4, 4, &[a, b, b, c, b, a, c, b, b, c, a, b, c, b, b, a]);
    assert_eq!(m, expect);
    assert_eq!(m.transpose(), m);
    assert!(materialize_dense(&g, &[65, 64]).is_err());
    let mut csv = Vec::new();
    write_dense_csv(&m, &mut csv).unwrap();
    assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 4);
}

fn s1(n: usize, h: f64) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => 2.0 / h,
        1 => -1.0 / h,
        _ => 0.0,
    })
}

fn m1(n: usize, h: f64) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => 4.0 * h / 6.0,
        1 => h / 6.0,
        _ => 0.0,
    })
}

#[test]
fn classical_equals_kronecker_sum() {
    let h = 0.2;
    let (s, m) = (s1(3, h), m1(3, h));
    // column-major unknowns: the first index is the fastest, so it is the right Kronecker factor
    let k2 = m.kronecker(&s) + s.kronecker(&m);
    let dense = materialize_dense(&classical_generating_tensor(2, h).unwrap(), &[3, 3]).unwrap();
    assert!((dense - &k2).abs().max() < 1e-14);

    let (s, m) = (s1(4, h), m1(4, h));
    let k3 = m.kronecker(&m).kronecker(&s) + m.kronecker(&s).kronecker(&m) + s.kronecker(&m).kronecker(&m);
    let op = build_operator(&classical_generating_tensor(3, h).unwrap(), &[4, 4, 4]).unwrap();
    let v: Vec<f64> = (0..64).map(|i| ((i * 7 % 13) as f64 - 6.0) / 5.0).collect();
    let y = op.matvec(&v).unwrap();
    assert!(rel_inf(&y, &dense_apply(&k3, &v)) < 1e-13);
}

#[test]
fn table_tensor_dense_entries() {
    let g = {
        let t = closed_form_table_2d(0.5, 0.8).unwrap();
        GeneratingTensor::from_sorted_fn(2, 4, 3, 1.0, None, |k| t[k[0]][k[1]]).unwrap()
    };
    let m = materialize_dense(&g, &[4, 4]).unwrap();
    let t = closed_form_table_2d(0.5, 0.8).unwrap();
    for l in 0..16 {
        for lp in 0..16 {
            let (a, b): ((usize, usize), (usize, usize)) = ((l % 4, l / 4), (lp % 4, lp / 4));
            let k = (a.0.abs_diff(b.0), a.1.abs_diff(b.1));
            let expect = if k.0 <= 2 && k.1 <= 2 { t[k.0][k.1] } else { 0.0 };
            assert_eq!(m[(l, lp)], expect);
        }
    }
    let op = build_operator(&g, &[4, 4]).unwrap();
    let v: Vec<f64> = (0..16).map(|i| (i as f64).cos()).collect();
    assert!(rel_inf(&op.matvec(&v).unwrap(), &dense_apply(&m, &v)) < 1e-13);
}

#[test]
fn nonlocal_matrix_is_positive_definite() {
    for &(alpha, delta) in &[(-1.0, 0.3), (0.5, 0.25), (1.5, 0.05)] {
        let h = 1.0 / 9.0;
        let kern = make_kernel(2, alpha, delta, Normalization::PaperPrinted).unwrap();
        let g = assemble_generating_tensor(2, 8, h, &kern, &QuadConfig::default()).unwrap();
        let m = materialize_dense(&g, &[8, 8]).unwrap();
        let eig = m.symmetric_eigenvalues();
        assert!(eig.min() > 0.0, "α={alpha}: min eigenvalue {}", eig.min());
    }
}

#[test]
fn symbol_is_real_and_padding_smooth() {
    let kern = make_kernel(2, 0.5, 0.3, Normalization::PaperPrinted).unwrap();
    let g = assemble_generating_tensor(2, 20, 0.05, &kern, &QuadConfig::default()).unwrap();
    let op = build_operator(&g, &[20, 13]).unwrap();
    assert_eq!(op.padded_dims(), &[fft_size(39), fft_size(25)]);
    assert!(op.symbol_imag_residue() < 1e-12);
}

#[test]
fn matvec_cost_scales_near_linearly() {
    let g = classical_generating_tensor(2, 0.01).unwrap();
    // best of several runs, so a busy machine only inflates the noise floor
    let time = |n: usize| {
        let op = build_operator(&g, &[n, n]).unwrap();
        let v = vec![1.0; op.len()];
        let mut ws = Workspace::default();
        let mut out = vec![0.0; op.len()];
        op.matvec_into(&v, &mut out, &mut ws).unwrap();
        (0..7)
            .map(|_| {
                let start = std::time::Instant::now();
                for _ in 0..5 {
                    op.matvec_into(&v, &mut out, &mut ws).unwrap();
                }
                start.elapsed().as_secs_f64()
            })
            .fold(f64::INFINITY, f64::min)
    };
    let (t1, t2) = (time(128), time(256));
    // padded sizes 256² and 512²: P log P grows by 4·18/16
    let predicted = 4.0 * 18.0 / 16.0;
    assert!(t2 <= 1.5 * predicted * t1.max(1e-5), "{t1} -> {t2}");
}
