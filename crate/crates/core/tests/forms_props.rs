use nalgebra::DMatrix;
use num_traits::{Signed, ToPrimitive, Zero};
use oklab::forms::{
    chain_inequality_check, hyperbolic_axioms_check, pdc_analysis, rectangle_form, signature,
    GramMatrix, SymMultiForm,
};
use oklab::rational::int;
use oklab::{Rat, RatVector};
use proptest::prelude::*;

fn sym_matrix(r: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(-4i64..=4, r * r).prop_map(move |v| {
        let mut m = vec![vec![0; r]; r];
        for i in 0..r {
            for j in i..r {
                m[i][j] = v[i * r + j];
                m[j][i] = v[i * r + j];
            }
        }
        m
    })
}

fn to_rat(m: &[Vec<i64>]) -> Vec<Vec<Rat>> {
    m.iter()
        .map(|r| r.iter().map(|&x| int(x)).collect())
        .collect()
}

/// Signs of eigenvalues as a floating-point oracle.
fn float_signature(m: &[Vec<i64>]) -> (usize, usize, usize) {
    let r = m.len();
    let a = DMatrix::from_fn(r, r, |i, j| m[i][j] as f64);
    let ev = a.symmetric_eigen().eigenvalues;
    let pos = ev.iter().filter(|&&x| x > 1e-9).count();
    let neg = ev.iter().filter(|&&x| x < -1e-9).count();
    (pos, r - pos - neg, neg)
}

/// Product of elementary row operations `row_i += k row_j`.
fn unimodular(r: usize, ops: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..r)
        .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
        .collect();
    for &(i, j, k) in ops {
        let (i, j) = (i % r, j % r);
        if i == j {
            continue;
        }
        for c in 0..r {
            u[i][c] += k * u[j][c];
        }
    }
    u
}

fn congruence(g: &[Vec<i64>], u: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = g.len();
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    (0..r)
                        .map(|a| (0..r).map(|b| u[a][i] * g[a][b] * u[b][j]).sum::<i64>())
                        .sum()
                })
                .collect()
        })
        .collect()
}

fn positive_vec(n: usize) -> impl Strategy<Value = RatVector> {
    prop::collection::vec((1i64..=9, 1i64..=4), n).prop_map(|v| {
        RatVector::new(
            v.into_iter()
                .map(|(a, b)| Rat::new(a.into(), b.into()))
                .collect(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Sylvester's law of inertia, checked against eigenvalue signs.
    #[test]
    fn signature_congruence_invariant(
        r in 2usize..=4,
        m in sym_matrix(4),
        ops in prop::collection::vec((0usize..4, 0usize..4, -2i64..=2), 0..8),
    ) {
        let m: Vec<Vec<i64>> = m[..r].iter().map(|row| row[..r].to_vec()).collect();
        let g = GramMatrix::new(to_rat(&m)).unwrap();
        let sig = signature(&g);
        prop_assert_eq!(sig, float_signature(&m));
        let u = unimodular(r, &ops);
        let h = GramMatrix::new(to_rat(&congruence(&m, &u))).unwrap();
        prop_assert_eq!(signature(&h), sig);
    }

    /// Block configurations with `Gα = 0` are negative semidefinite and the
    /// reported kernel vectors annihilate the matrix.
    #[test]
    fn pdc_kernel_annihilates(
        sizes in prop::collection::vec(1usize..=3, 1..=3),
        alpha in prop::collection::vec(1i64..=5, 9),
        weights in prop::collection::vec(0i64..=3, 81),
    ) {
        let r: usize = sizes.iter().sum();
        let mut block = vec![0usize; r];
        let mut start = 0;
        for (b, &s) in sizes.iter().enumerate() {
            for i in start..start + s {
                block[i] = b;
            }
            start += s;
        }
        let mut w = vec![vec![Rat::zero(); r]; r];
        for i in 0..r {
            for j in i + 1..r {
                if block[i] != block[j] {
                    continue;
                }
                // Consecutive members are always linked so blocks stay connected.
                let k = if j == i + 1 { weights[i * 9 + j].max(1) } else { weights[i * 9 + j] };
                w[i][j] = int(k);
                w[j][i] = int(k);
            }
        }
        let alpha: Vec<Rat> = alpha[..r].iter().map(|&a| int(a)).collect();
        for i in 0..r {
            let s: Rat = (0..r).filter(|&j| j != i).map(|j| &w[i][j] * &alpha[j]).sum();
            w[i][i] = -s / &alpha[i];
        }
        let g = GramMatrix::new(w.clone()).unwrap();
        let rep = pdc_analysis(&g, &alpha).unwrap();
        prop_assert!(rep.neg_semidef);
        prop_assert_eq!(rep.components.len(), sizes.len());
        prop_assert_eq!(rep.kernel_dim, rep.components.len());
        for v in &rep.kernel_basis {
            for row in &w {
                let s: Rat = row.iter().zip(v.coords()).map(|(a, b)| a * b).sum();
                prop_assert!(s.is_zero());
            }
        }
    }

    /// Box law for the rectangle form: `(c, ..., c) = n!·Π c_i`.
    #[test]
    fn rectangle_volume_is_scaled_product(n in 2usize..=4, c in positive_vec(4)) {
        let c = RatVector::new(c.coords()[..n].to_vec());
        let t = rectangle_form(n).unwrap();
        let fact: Rat = (1..=n as i64).map(int).product();
        let prod: Rat = c.coords().iter().cloned().product();
        prop_assert_eq!(t.volume(&c).unwrap(), fact * prod);
    }

    /// When the axioms hold on a sample set, the chain inequality holds on
    /// every tuple drawn from it.
    #[test]
    fn axioms_imply_chain(samples in prop::collection::vec(positive_vec(3), 3..=4)) {
        let t = rectangle_form(3).unwrap();
        let rep = hyperbolic_axioms_check(&t, &samples).unwrap();
        prop_assert!(rep.passed, "{:?}", rep);
        for a in 0..samples.len() {
            for b in 0..samples.len() {
                for c in 0..samples.len() {
                    let xs = vec![samples[a].clone(), samples[b].clone(), samples[c].clone()];
                    prop_assert!(chain_inequality_check(&t, &xs).unwrap());
                }
            }
        }
    }

    /// Lorentzian plane: on the forward cone the axioms hold and the chain
    /// inequality is the reverse Cauchy-Schwarz inequality.
    #[test]
    fn lorentzian_forward_cone(pts in prop::collection::vec((1i64..=6, -5i64..=5), 2..=4)) {
        let g = GramMatrix::from_ints(&[&[1, 0], &[0, -1]]).unwrap();
        let t = SymMultiForm::from_gram(&g);
        let samples: Vec<RatVector> = pts
            .iter()
            .filter(|(x, y)| x.abs() > y.abs())
            .map(|&(x, y)| RatVector::from_ints(&[x, y]))
            .collect();
        prop_assume!(samples.len() >= 2);
        let rep = hyperbolic_axioms_check(&t, &samples).unwrap();
        prop_assert!(rep.reverse_cauchy_schwarz.is_none());
        prop_assert!(rep.positivity.is_none());
        for a in &samples {
            for b in &samples {
                prop_assert!(chain_inequality_check(&t, &[a.clone(), b.clone()]).unwrap());
                let lhs = t.eval(&[a, b]).unwrap().to_f64().unwrap();
                let rhs = (t.volume(a).unwrap() * t.volume(b).unwrap()).to_f64().unwrap().sqrt();
                prop_assert!(lhs >= rhs - 1e-9);
            }
        }
    }
}
