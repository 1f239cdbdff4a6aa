//! Acceptance gate: one test per criterion, each printing a pass line.
//! Run with `cargo test --test acceptance -- --nocapture` to see them.

use cpmglue::channel::KrausChannel;
use cpmglue::constructions::{
    self, DevicePair, SuperpositionProbe,
};
use cpmglue::gluing::{self, GluingMatrix, LspVectors};
use cpmglue::matrix::ComplexMatrix;
use cpmglue::numerics::{self, DEFAULT_TOL};
use cpmglue::random;
use cpmglue::subspace::{self, BlockSplit};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pass(n: usize, what: &str) {
    println!("criterion {n}: {what}: pass");
}

fn random_split(rng: &mut ChaCha8Rng, max: usize) -> BlockSplit {
    BlockSplit::new(
        rng.gen_range(1..=max),
        rng.gen_range(1..=max),
        rng.gen_range(1..=max),
        rng.gen_range(1..=max),
    )
    .unwrap()
}

struct Instance {
    phi1: KrausChannel,
    phi2: KrausChannel,
    g: GluingMatrix,
    glued: KrausChannel,
}

fn random_instance(rng: &mut ChaCha8Rng, split: &BlockSplit, cmat: Option<ComplexMatrix>) -> Instance {
    let k1 = rng.gen_range(1..=2);
    let k2 = rng.gen_range(1..=2);
    let phi1 = random::tp_channel(rng, split.s1_dim, split.t1_dim, k1);
    let phi2 = random::tp_channel(rng, split.s2_dim, split.t2_dim, k2);
    let rep1 = phi1.linearly_independent().unwrap();
    let rep2 = phi2.linearly_independent().unwrap();
    let n = rep1.kraus().len();
    let m = rep2.kraus().len();
    let cmat = cmat.unwrap_or_else(|| {
        let scale = rng.gen_range(0.1..1.0);
        random::contraction(rng, n, m, scale)
    });
    let g = GluingMatrix {
        c: cmat,
        rep1: rep1.kraus().to_vec(),
        rep2: rep2.kraus().to_vec(),
    };
    let glued = gluing::build_gluing(&phi1, &phi2, &g, split).unwrap();
    Instance {
        phi1,
        phi2,
        g,
        glued,
    }
}

#[test]
fn criterion_1_gluing_bijection() {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    for i in 0..100 {
        let split = random_split(&mut rng, 3);
        let inst = random_instance(&mut rng, &split, None);
        let choi = inst.glued.choi();
        let trace = choi.matrix.trace().re;
        let report = inst.glued.classify();
        assert!(
            report.min_choi_eigenvalue >= -1e-9 * trace.max(1.0),
            "instance {i}: min eig {}",
            report.min_choi_eigenvalue
        );
        assert!(report.tp_residual <= 1e-9, "instance {i}: tp {}", report.tp_residual);
        let sp = subspace::sp_residual(&inst.glued, &split).unwrap();
        assert!(sp <= 1e-9, "instance {i}: sp {sp}");
        let (b1, b2) = subspace::sp_blocks(&inst.glued, &split).unwrap();
        assert!(b1.distance(&inst.phi1).unwrap() <= 1e-9, "instance {i}: phi1");
        assert!(b2.distance(&inst.phi2).unwrap() <= 1e-9, "instance {i}: phi2");
        let back =
            gluing::extract_gluing_matrix_with_reps(&inst.glued, &inst.g.rep1, &inst.g.rep2, &split)
                .unwrap();
        for r in 0..inst.g.c.rows() {
            for col in 0..inst.g.c.cols() {
                let diff = (back.c.get(r, col) - inst.g.c.get(r, col)).norm();
                assert!(diff <= 1e-10, "instance {i}: C[{r}][{col}] off by {diff}");
            }
        }
    }
    pass(1, "100 random gluings are CP, TP, SP, restrict and extract correctly");
}

#[test]
fn criterion_2_kraus_number_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    for i in 0..50 {
        let split = random_split(&mut rng, 2);
        // Plant a singular spectrum with exact ones.
        let k1 = rng.gen_range(1..=2);
        let k2 = rng.gen_range(1..=2);
        let phi1 = random::tp_channel(&mut rng, split.s1_dim, split.t1_dim, k1);
        let phi2 = random::tp_channel(&mut rng, split.s2_dim, split.t2_dim, k2);
        let rep1 = phi1.linearly_independent().unwrap();
        let rep2 = phi2.linearly_independent().unwrap();
        let n = rep1.kraus().len();
        let m = rep2.kraus().len();
        let d = n.min(m);
        let mut ones = 0usize;
        let sigma: Vec<f64> = (0..d)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    ones += 1;
                    1.0
                } else {
                    rng.gen_range(0.2..0.9)
                }
            })
            .collect();
        let u = random::unitary(&mut rng, n);
        let v = random::unitary(&mut rng, m);
        let diag = ComplexMatrix::from_fn(n, m, |r, col| {
            if r == col && r < d {
                c(sigma[r], 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let cmat = &(&u * &diag) * &v.adjoint();
        let g = GluingMatrix {
            c: cmat,
            rep1: rep1.kraus().to_vec(),
            rep2: rep2.kraus().to_vec(),
        };
        let glued = gluing::build_gluing(&phi1, &phi2, &g, &split).unwrap();
        let k = glued.classify().kraus_number;
        assert_eq!(k, n + m - ones, "instance {i}: spectrum {sigma:?}");
        assert!(n.max(m) <= k && k <= n + m, "instance {i}: bounds");
    }
    pass(2, "50 planted spectra satisfy K = K1 + K2 - #{{sigma = 1}} and the bounds");
}

#[test]
fn criterion_3_swap_mixture() {
    let x = ComplexMatrix::from_rows_vec(
        2,
        2,
        vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
    )
    .unwrap();
    let phi = constructions::swap_mixture(&x, &x).unwrap();
    let split = BlockSplit::symmetric(2, 2).unwrap();
    assert!(subspace::is_sp(&phi, &split, DEFAULT_TOL).unwrap());
    let half = c(0.5f64.sqrt(), 0.0);
    let rep1 = vec![x.scale(half), ComplexMatrix::identity(2).scale(half)];
    let g = gluing::extract_gluing_matrix_with_reps(&phi, &rep1, &rep1, &split).unwrap();
    let mut expect = ComplexMatrix::zeros(2, 2);
    expect.set(0, 1, c(1.0, 0.0));
    expect.set(1, 0, c(1.0, 0.0));
    assert!((&g.c - &expect).frobenius_norm() <= 1e-10);
    let a = gluing::analyze(&g, DEFAULT_TOL).unwrap();
    assert!(!a.is_lsp);
    assert_eq!(phi.classify().kraus_number, 2);
    pass(3, "swap mixture has C = [[0,1],[1,0]], SP yes, LSP no, K = 2");
}

fn lsp_verdict(phi: &KrausChannel, split: &BlockSplit) -> bool {
    let (b1, b2) = subspace::sp_blocks(phi, split).unwrap();
    let r1 = b1.linearly_independent().unwrap();
    let r2 = b2.linearly_independent().unwrap();
    let g = gluing::extract_gluing_matrix_with_reps(phi, r1.kraus(), r2.kraus(), split).unwrap();
    gluing::analyze(&g, DEFAULT_TOL).unwrap().is_lsp
}

#[test]
fn criterion_4_ancilla_classification() {
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    let split = BlockSplit::symmetric(2, 1).unwrap();
    for _ in 0..10 {
        let a = random::state(&mut rng, 2);
        let ak = ComplexMatrix::column_from(&a);
        let sigma = &ak * &ak.adjoint();
        let lam = constructions::attach_ancilla(&sigma, &split).unwrap();
        let ext = BlockSplit::new(2, 1, 4, 2).unwrap();
        assert!(lsp_verdict(&lam, &ext), "pure sigma must be LSP");
    }
    for _ in 0..10 {
        let rank = rng.gen_range(2..=3);
        let sigma = random::density_of_rank(&mut rng, 3, rank);
        let lam = constructions::attach_ancilla(&sigma, &split).unwrap();
        let ext = BlockSplit::new(2, 1, 6, 3).unwrap();
        assert!(!lsp_verdict(&lam, &ext), "mixed sigma must not be LSP");
    }
    for da in 1..=3usize {
        let tr = constructions::partial_trace_channel(&split, da).unwrap();
        let ext = BlockSplit::new(2 * da, da, 2, 1).unwrap();
        assert_eq!(lsp_verdict(&tr, &ext), da == 1, "partial trace dim {da}");
    }
    pass(4, "attach_ancilla LSP iff pure, partial trace LSP iff trivial ancilla");
}

#[test]
fn criterion_5_sprep_reconstructions() {
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    for i in 0..25 {
        let split = random_split(&mut rng, 3);
        let inst = random_instance(&mut rng, &split, None);
        let phi = inst.glued;
        let (k, psi) = constructions::sprep1(&phi, &split).unwrap();
        assert_eq!(psi.classify().kraus_number, 1, "instance {i}: single Kraus");
        let tsplit = BlockSplit::symmetric(split.t1_dim, split.t2_dim).unwrap();
        let tr = constructions::partial_trace_channel(&tsplit, k).unwrap();
        let d1 = psi.then(&tr).unwrap().distance(&phi).unwrap();
        assert!(d1 <= 1e-9, "instance {i}: sprep1 distance {d1}");

        let a = random::state(&mut rng, k);
        let psi2 = constructions::sprep2(&phi, &split, &a).unwrap();
        let ak = ComplexMatrix::column_from(&a);
        let attach = constructions::attach_ancilla(&(&ak * &ak.adjoint()), &split).unwrap();
        let d2 = attach
            .then(&psi2)
            .unwrap()
            .then(&tr)
            .unwrap()
            .distance(&phi)
            .unwrap();
        assert!(d2 <= 1e-9, "instance {i}: sprep2 distance {d2}");
        let ext = constructions::tensor_split(&split, k).unwrap();
        assert!(lsp_verdict(&psi2, &ext), "instance {i}: sprep2 LSP");
    }
    pass(5, "25 SP TP channels reconstruct through sprep1 and sprep2");
}

#[test]
fn criterion_6_extreme_decomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(1006);
    for i in 0..50 {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=4);
        let scale = rng.gen_range(0.1..1.0);
        let cmat = random::contraction(&mut rng, n, m, scale);
        let g = GluingMatrix {
            c: cmat.clone(),
            rep1: vec![],
            rep2: vec![],
        };
        let terms = gluing::extreme_decompose(&g).unwrap();
        let wsum: f64 = terms.iter().map(|(w, _)| w).sum();
        assert!((wsum - 1.0).abs() <= 1e-12, "instance {i}: weights sum {wsum}");
        let mut acc = ComplexMatrix::zeros(n, m);
        for (w, d) in &terms {
            assert!(*w >= -1e-12, "instance {i}: negative weight");
            let small = n.min(m);
            let gram = if n <= m {
                &(d * &d.adjoint()) - &ComplexMatrix::identity(small)
            } else {
                &(&d.adjoint() * d) - &ComplexMatrix::identity(small)
            };
            assert!(gram.frobenius_norm() <= 1e-10, "instance {i}: DDdag");
            acc = &acc + &d.scale(c(*w, 0.0));
        }
        assert!(
            (&acc - &cmat).frobenius_norm() <= 1e-12,
            "instance {i}: recombination"
        );
    }
    // C already extreme: a random co-isometry decomposes as itself.
    let u = random::unitary(&mut rng, 3);
    let d0 = u.block(0, 0, 2, 3);
    let g = GluingMatrix {
        c: d0.clone(),
        rep1: vec![],
        rep2: vec![],
    };
    let terms = gluing::extreme_decompose(&g).unwrap();
    assert_eq!(terms.len(), 1);
    assert!((terms[0].0 - 1.0).abs() <= 1e-12);
    assert!((&terms[0].1 - &d0).frobenius_norm() <= 1e-9);
    pass(6, "50 extreme decompositions are convex, extreme and recombine exactly");
}

#[test]
fn criterion_7_unitary_family() {
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    for _ in 0..10 {
        let d1 = rng.gen_range(1..=3);
        let d2 = rng.gen_range(1..=3);
        let split = BlockSplit::symmetric(d1, d2).unwrap();
        let u1 = random::unitary(&mut rng, d1);
        let u2 = random::unitary(&mut rng, d2);
        let w: f64 = rng.gen_range(0.1..0.9);
        let probe = SuperpositionProbe::new(
            random::state(&mut rng, d1),
            random::state(&mut rng, d2),
            c(w.sqrt(), 0.0),
            c(0.0, (1.0 - w).sqrt()),
        )
        .unwrap();
        let theta = rng.gen_range(-3.0..3.0);
        for &r in &[0.0, 0.25, 0.5, 0.75, 1.0] {
            let phi = constructions::unitary_gluing(&u1, &u2, r, theta).unwrap();
            let m = constructions::coherence_metric(&phi, &split, &probe).unwrap();
            assert!((m - r).abs() <= 1e-10, "r {r} metric {m}");
        }
        let phi = constructions::unitary_gluing(&u1, &u2, 1.0, theta).unwrap();
        let ket = probe.ket(&split).unwrap();
        let out = phi.apply(&(&ket * &ket.adjoint())).unwrap();
        let purity = (&out * &out).trace().re;
        assert!((purity - 1.0).abs() <= 1e-10);
        let w1 = (&split.pt1() * &out).trace().re;
        assert!((w1 - w).abs() <= 1e-12, "block weight drift");
    }
    pass(7, "coherence metric matches r; r = 1 outputs are pure with preserved weights");
}

#[test]
fn criterion_8_lsp_uniqueness() {
    let mut rng = ChaCha8Rng::seed_from_u64(1008);
    for i in 0..20 {
        let split = random_split(&mut rng, 2);
        let sq = BlockSplit::symmetric(split.s1_dim, split.s2_dim).unwrap();
        let phi1 = random::tp_channel(&mut rng, sq.s1_dim, sq.s1_dim, 2);
        let phi2 = random::tp_channel(&mut rng, sq.s2_dim, sq.s2_dim, 2);
        let k1 = phi1.classify().kraus_number;
        let k2 = phi2.classify().kraus_number;
        let shrink = rng.gen_range(0.3..1.0);
        let c1: Vec<Complex64> = random::state(&mut rng, k1)
            .iter()
            .map(|z| z * shrink)
            .collect();
        let c2 = random::state(&mut rng, k2);
        let p1 = DevicePair::new(phi1.clone(), c1.clone()).unwrap();
        let p2 = DevicePair::new(phi2.clone(), c2.clone()).unwrap();
        let a = constructions::pair_to_lsp(&p1, &p2, &sq).unwrap();
        // A different gauge factorization of the same C = c1 c2^dag.
        let phase = Complex64::from_polar(1.0, rng.gen_range(-3.0..3.0));
        let c1b: Vec<Complex64> = c1.iter().map(|z| z * phase).collect();
        let c2b: Vec<Complex64> = c2.iter().map(|z| z * phase).collect();
        let q1 = DevicePair::new(phi1.clone(), c1b).unwrap();
        let q2 = DevicePair::new(phi2.clone(), c2b).unwrap();
        let b = constructions::pair_to_lsp(&q1, &q2, &sq).unwrap();
        let dist = a.distance(&b).unwrap();
        assert!(dist <= 1e-12, "instance {i}: gauge distance {dist}");
    }
    // Every K2 = 1 gluing is LSP. A single-Kraus TP channel needs
    // t2 >= s2 so that the lone operator can be an isometry.
    for i in 0..10 {
        let s2 = rng.gen_range(1..=2);
        let t2 = rng.gen_range(s2..=2);
        let split = BlockSplit::new(
            rng.gen_range(1..=2),
            s2,
            rng.gen_range(1..=2),
            t2,
        )
        .unwrap();
        let phi1 = random::tp_channel(&mut rng, split.s1_dim, split.t1_dim, 2);
        let phi2 = random::tp_channel(&mut rng, split.s2_dim, split.t2_dim, 1);
        assert_eq!(phi2.classify().kraus_number, 1);
        let rep1 = phi1.linearly_independent().unwrap();
        let rep2 = phi2.linearly_independent().unwrap();
        let scale = rng.gen_range(0.1..1.0);
        let cmat = random::contraction(&mut rng, rep1.kraus().len(), 1, scale);
        let g = GluingMatrix {
            c: cmat,
            rep1: rep1.kraus().to_vec(),
            rep2: rep2.kraus().to_vec(),
        };
        let glued = gluing::build_gluing(&phi1, &phi2, &g, &split).unwrap();
        assert!(lsp_verdict(&glued, &split), "instance {i}: K2 = 1 must be LSP");
    }
    pass(8, "pair_to_lsp is gauge independent and K2 = 1 gluings are LSP");
}

#[test]
fn criterion_9_representation_covariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(1009);
    let split = BlockSplit::symmetric(2, 2).unwrap();
    let inst = random_instance(&mut rng, &split, None);
    let (n, m) = inst.g.shape();
    let u1 = random::unitary(&mut rng, n);
    let u2 = random::unitary(&mut rng, m);
    // New representations V'_i = sum_j conj(U_ij) V_j, which transform the
    // coefficient matrix as C' = U1 C U2^dag.
    let mix = |rep: &[ComplexMatrix], u: &ComplexMatrix| -> Vec<ComplexMatrix> {
        (0..rep.len())
            .map(|i| {
                let mut acc = ComplexMatrix::zeros(rep[0].rows(), rep[0].cols());
                for (j, v) in rep.iter().enumerate() {
                    acc = &acc + &v.scale(u.get(i, j).conj());
                }
                acc
            })
            .collect()
    };
    let rep1p = mix(&inst.g.rep1, &u1);
    let rep2p = mix(&inst.g.rep2, &u2);
    let gp = gluing::extract_gluing_matrix_with_reps(&inst.glued, &rep1p, &rep2p, &split).unwrap();
    let expect = &(&u1 * &inst.g.c) * &u2.adjoint();
    assert!((&gp.c - &expect).frobenius_norm() <= 1e-9);
    let s_old = numerics::svd(&inst.g.c).unwrap().singulars;
    let s_new = numerics::svd(&gp.c).unwrap().singulars;
    for (a, b) in s_old.iter().zip(s_new.iter()) {
        assert!((a - b).abs() <= 1e-10, "singular drift");
    }
    pass(9, "re-extraction after a planted basis change gives C' = U1 C U2^dag");
}
