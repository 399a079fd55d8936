//! Brute-force reference computations on basis components.
//!
//! Everything here works on plain `Vec<Scalar>` arrays indexed by basis
//! vectors and is written directly from the defining formulas, without the
//! library's tensor or connection code.

#![allow(dead_code)]

use natcon_core::structure::AcbStructure;
use natcon_core::{Scalar, Tensor};

pub fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

pub fn r(n: i64, d: i64) -> Scalar {
    Scalar::new(n, d)
}

/// Rank-3 array `a[x][y][z]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arr3 {
    pub d: usize,
    pub v: Vec<Scalar>,
}

impl Arr3 {
    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize, usize) -> Scalar) -> Self {
        let mut v = Vec::with_capacity(d * d * d);
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    v.push(f(x, y, z));
                }
            }
        }
        Arr3 { d, v }
    }

    pub fn zero(d: usize) -> Self {
        Arr3::from_fn(d, |_, _, _| Scalar::zero())
    }

    pub fn of(t: &Tensor) -> Self {
        assert_eq!(t.rank(), 3);
        Arr3::from_fn(t.dim(), |x, y, z| t.get(&[x, y, z]).clone())
    }

    pub fn at(&self, x: usize, y: usize, z: usize) -> &Scalar {
        &self.v[(x * self.d + y) * self.d + z]
    }

    pub fn is_zero(&self) -> bool {
        self.v.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, o: &Arr3) -> Arr3 {
        Arr3::from_fn(self.d, |x, y, z| self.at(x, y, z) + o.at(x, y, z))
    }

    pub fn sub(&self, o: &Arr3) -> Arr3 {
        Arr3::from_fn(self.d, |x, y, z| self.at(x, y, z) - o.at(x, y, z))
    }

    pub fn scale(&self, c: &Scalar) -> Arr3 {
        Arr3::from_fn(self.d, |x, y, z| c * self.at(x, y, z))
    }

    /// `S_{x,y,z} a(x,y,z)`.
    pub fn cyclic_sum_is_zero(&self) -> bool {
        let d = self.d;
        (0..d).all(|x| {
            (0..d).all(|y| {
                (0..d).all(|z| {
                    let c = &(self.at(x, y, z) + self.at(y, z, x)) + self.at(z, x, y);
                    c.is_zero()
                })
            })
        })
    }
}

/// Rank-4 array `a[x][y][z][w]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arr4 {
    pub d: usize,
    pub v: Vec<Scalar>,
}

impl Arr4 {
    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize, usize, usize) -> Scalar) -> Self {
        let mut v = Vec::with_capacity(d.pow(4));
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    for w in 0..d {
                        v.push(f(x, y, z, w));
                    }
                }
            }
        }
        Arr4 { d, v }
    }

    pub fn of(t: &Tensor) -> Self {
        assert_eq!(t.rank(), 4);
        Arr4::from_fn(t.dim(), |x, y, z, w| t.get(&[x, y, z, w]).clone())
    }

    pub fn at(&self, x: usize, y: usize, z: usize, w: usize) -> &Scalar {
        &self.v[((x * self.d + y) * self.d + z) * self.d + w]
    }

    pub fn add(&self, o: &Arr4) -> Arr4 {
        Arr4::from_fn(self.d, |x, y, z, w| self.at(x, y, z, w) + o.at(x, y, z, w))
    }

    /// `a(x,y,z,v)` for a vector `v` in the last slot.
    pub fn with_vector(&self, v: &[Scalar]) -> Arr3 {
        Arr3::from_fn(self.d, |x, y, z| {
            (0..self.d)
                .filter(|&w| !v[w].is_zero())
                .map(|w| self.at(x, y, z, w) * &v[w])
                .sum()
        })
    }
}

/// Components of a structure, read once.
pub struct Frame {
    pub n: usize,
    pub d: usize,
    /// `g[i][j] = g(e_i, e_j)`
    pub g: Vec<Vec<Scalar>>,
    pub gi: Vec<Vec<Scalar>>,
    /// `phi[i][j]`: the `e_i` component of `φe_j`
    pub phi: Vec<Vec<Scalar>>,
    pub xi: Vec<Scalar>,
    pub eta: Vec<Scalar>,
}

fn unit(d: usize, i: usize) -> Vec<Scalar> {
    (0..d).map(|k| if k == i { s(1) } else { s(0) }).collect()
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Frame {
    pub fn new(st: &AcbStructure) -> Self {
        let d = st.dim();
        let g: Vec<Vec<Scalar>> = (0..d)
            .map(|i| (0..d).map(|j| st.g().get(i, j).clone()).collect())
            .collect();
        let gi: Vec<Vec<Scalar>> = (0..d)
            .map(|i| (0..d).map(|j| st.g_inv().get(i, j).clone()).collect())
            .collect();
        for i in 0..d {
            for j in 0..d {
                let p: Scalar = (0..d).map(|k| &g[i][k] * &gi[k][j]).sum();
                assert_eq!(p, if i == j { s(1) } else { s(0) }, "g·g⁻¹ = Id");
            }
        }
        let cols: Vec<Vec<Scalar>> = (0..d).map(|j| st.phi().apply(&unit(d, j))).collect();
        let phi = (0..d)
            .map(|i| (0..d).map(|j| cols[j][i].clone()).collect())
            .collect();
        Frame {
            n: st.n(),
            d,
            g,
            gi,
            phi,
            xi: st.xi().to_vec(),
            eta: st.eta().to_vec(),
        }
    }

    pub fn inv_2n(&self) -> Scalar {
        r(1, 2 * self.n as i64)
    }

    pub fn phi_v(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.d).map(|i| dot(&self.phi[i], v)).collect()
    }

    /// `w∘φ`
    pub fn form_phi(&self, w: &[Scalar]) -> Vec<Scalar> {
        (0..self.d)
            .map(|j| (0..self.d).map(|i| &w[i] * &self.phi[i][j]).sum())
            .collect()
    }

    pub fn gv(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let mut acc = s(0);
        for i in 0..self.d {
            if u[i].is_zero() {
                continue;
            }
            acc += &u[i] * &dot(&self.g[i], v);
        }
        acc
    }

    pub fn raise(&self, w: &[Scalar]) -> Vec<Scalar> {
        (0..self.d).map(|i| dot(&self.gi[i], w)).collect()
    }

    pub fn lower(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.d).map(|i| dot(&self.g[i], v)).collect()
    }

    pub fn e(&self, i: usize) -> Vec<Scalar> {
        unit(self.d, i)
    }

    pub fn ev(w: &[Scalar], v: &[Scalar]) -> Scalar {
        dot(w, v)
    }

    /// Basis-level tables: `g(e_i, e_j)`, `g(e_i, φe_j)`, `g(φe_i, φe_j)`.
    fn tables(&self) -> (Vec<Vec<Scalar>>, Vec<Vec<Scalar>>, Vec<Vec<Scalar>>) {
        let d = self.d;
        let pe: Vec<Vec<Scalar>> = (0..d).map(|j| self.phi_v(&self.e(j))).collect();
        let g_p = (0..d)
            .map(|i| (0..d).map(|j| self.gv(&self.e(i), &pe[j])).collect())
            .collect();
        let g_pp = (0..d)
            .map(|i| (0..d).map(|j| self.gv(&pe[i], &pe[j])).collect())
            .collect();
        (self.g.clone(), g_p, g_pp)
    }

    /// `πₖ(x,y,z,w) = g(πₖ(x,y)z, w)` on basis vectors, k = 1..5.
    pub fn pi(&self, k: usize) -> Arr4 {
        let (g, gp, _) = self.tables();
        let et = &self.eta;
        // g(φx, w) = g(x, φw)
        let half = |x: usize, y: usize, z: usize, w: usize| -> Scalar {
            match k {
                1 => &g[y][z] * &g[x][w],
                2 => &gp[y][z] * &gp[x][w],
                3 => -(&(&g[y][z] * &gp[x][w]) + &(&gp[y][z] * &g[x][w])),
                4 => &(&(&et[y] * &et[z]) * &g[x][w]) + &(&(&g[y][z] * &et[x]) * &et[w]),
                5 => &(&(&et[y] * &et[z]) * &gp[x][w]) + &(&(&gp[y][z] * &et[x]) * &et[w]),
                _ => unreachable!(),
            }
        };
        Arr4::from_fn(self.d, |x, y, z, w| &half(x, y, z, w) - &half(y, x, z, w))
    }

    /// `F(x,y,z) = −(1/2n){g(φx,φy)θ(z) + g(x,φy)θ*(z) − 2n η(x)η(y)ω(z)}_(y↔z)`.
    pub fn f_from_forms(&self, theta: &[Scalar], theta_star: &[Scalar], omega: &[Scalar]) -> Arr3 {
        let (_, gp, gpp) = self.tables();
        let two_n = s(2 * self.n as i64);
        let k = -self.inv_2n();
        let a = |x: usize, y: usize, z: usize| -> Scalar {
            &(&(&gpp[x][y] * &theta[z]) + &(&gp[x][y] * &theta_star[z]))
                - &(&(&(&two_n * &self.eta[x]) * &self.eta[y]) * &omega[z])
        };
        Arr3::from_fn(self.d, |x, y, z| &k * &(&a(x, y, z) + &a(x, z, y)))
    }

    /// `(θ_h, θ*, ω)`: full traces, then `θ_h = θ − ω`.
    pub fn lee(&self, f: &Arr3) -> (Vec<Scalar>, Vec<Scalar>, Vec<Scalar>) {
        let d = self.d;
        let mut theta = vec![s(0); d];
        let mut theta_star = vec![s(0); d];
        let mut omega = vec![s(0); d];
        for z in 0..d {
            for i in 0..d {
                for j in 0..d {
                    theta[z] += &self.gi[i][j] * f.at(i, j, z);
                    let fij: Scalar = (0..d).map(|k| &self.phi[k][j] * f.at(i, k, z)).sum();
                    theta_star[z] += &self.gi[i][j] * &fij;
                    omega[z] += &(&self.xi[i] * &self.xi[j]) * f.at(i, j, z);
                }
            }
        }
        let theta_h = theta.iter().zip(&omega).map(|(a, b)| a - b).collect();
        (theta_h, theta_star, omega)
    }

    /// `F(x,φy,z)`
    fn f_phi(&self, f: &Arr3) -> Arr3 {
        Arr3::from_fn(self.d, |x, y, z| {
            (0..self.d).map(|k| &self.phi[k][y] * f.at(x, k, z)).sum()
        })
    }

    /// `A(x,y) = A(x,y,ξ)`
    fn last_xi(&self, a: &Arr3) -> Vec<Vec<Scalar>> {
        (0..self.d)
            .map(|x| {
                (0..self.d)
                    .map(|y| (0..self.d).map(|m| &self.xi[m] * a.at(x, y, m)).sum())
                    .collect()
            })
            .collect()
    }

    /// `T⁰ = ½{F(x,φy,z) + η(z)F(x,φy,ξ) + 2η(x)F(y,φz,ξ)}_[x↔y]`.
    pub fn t0_from_f(&self, f: &Arr3) -> Arr3 {
        let fp = self.f_phi(f);
        let fpx = self.last_xi(&fp);
        let et = &self.eta;
        let a = |x: usize, y: usize, z: usize| -> Scalar {
            &(fp.at(x, y, z) + &(&et[z] * &fpx[x][y])) + &(&(&s(2) * &et[x]) * &fpx[y][z])
        };
        Arr3::from_fn(self.d, |x, y, z| &r(1, 2) * &(&a(x, y, z) - &a(y, x, z)))
    }

    /// `Q⁰ = ½{F(x,φy,z) + η(z)F(x,φy,ξ) − 2η(y)F(x,φz,ξ)}`.
    pub fn q0_from_f(&self, f: &Arr3) -> Arr3 {
        let fp = self.f_phi(f);
        let fpx = self.last_xi(&fp);
        let et = &self.eta;
        Arr3::from_fn(self.d, |x, y, z| {
            let v = &(fp.at(x, y, z) + &(&et[z] * &fpx[x][y])) - &(&(&s(2) * &et[y]) * &fpx[x][z]);
            &r(1, 2) * &v
        })
    }

    /// `Q(x,y,z) = ½{T(x,y,z) − T(y,z,x) + T(z,x,y)}`.
    pub fn hayden(&self, t: &Arr3) -> Arr3 {
        Arr3::from_fn(self.d, |x, y, z| {
            &r(1, 2) * &(&(t.at(x, y, z) - t.at(y, z, x)) + t.at(z, x, y))
        })
    }

    /// `Q(x,y) − Q(y,x)`
    pub fn torsion_of(&self, q: &Arr3) -> Arr3 {
        Arr3::from_fn(self.d, |x, y, z| q.at(x, y, z) - q.at(y, x, z))
    }

    /// `D = ∇ + Q` preserves `g`, `φ` and `ξ`:
    /// `Q(x,y,z) = −Q(x,z,y)`, `Q(x,y,φz) − Q(x,φy,z) = F(x,y,z)`,
    /// `Q(x,ξ,z) = −F(x,φz,ξ)`.
    pub fn is_natural(&self, q: &Arr3, f: &Arr3) -> bool {
        let d = self.d;
        let fp = self.f_phi(f);
        let fpx = self.last_xi(&fp);
        for x in 0..d {
            for y in 0..d {
                let q_xi: Scalar = (0..d).map(|m| &self.xi[m] * q.at(x, m, y)).sum();
                if !(&q_xi + &fpx[x][y]).is_zero() {
                    return false;
                }
                for z in 0..d {
                    if !(q.at(x, y, z) + q.at(x, z, y)).is_zero() {
                        return false;
                    }
                    let a: Scalar = (0..d).map(|k| &self.phi[k][z] * q.at(x, y, k)).sum();
                    let b: Scalar = (0..d).map(|k| &self.phi[k][y] * q.at(x, k, z)).sum();
                    if &(&a - &b) - f.at(x, y, z) != s(0) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn lee_vectors(
        &self,
        theta_h: &[Scalar],
        theta_star: &[Scalar],
        omega: &[Scalar],
    ) -> LeeVectors {
        LeeVectors {
            a: self.raise(theta_h),
            a_star: self.raise(theta_star),
            a_hat: self.raise(omega),
        }
    }

    /// The four-parameter family.
    pub fn t_nat(&self, pis: &Pis, alpha: &[Scalar; 4], lv: &LeeVectors) -> Arr3 {
        let d = self.d;
        let phi2 = |v: &[Scalar]| self.phi_v(&self.phi_v(v));
        let p2s = phi2(&lv.a_star);
        let p2a = phi2(&lv.a);
        let pah = self.phi_v(&lv.a_hat);
        let q: Vec<Scalar> = (0..d)
            .map(|i| {
                &(&(&(&alpha[0] * &p2s[i]) - &(&alpha[1] * &p2a[i])) - &(&alpha[2] * &pah[i]))
                    + &(&alpha[3] * &lv.a_hat[i])
            })
            .collect();
        let k = self.inv_2n();
        pis.p35
            .with_vector(&q)
            .add(&pis.p24.with_vector(&lv.a_star).scale(&k))
            .add(&pis.p[4].with_vector(&lv.a).scale(&k))
            .sub(&pis.p[4].with_vector(&lv.a_hat))
    }

    /// `(1/4n)(π₁+π₂+π₄)(a*) + (1/2n)π₅(a) − π₅(â)`.
    pub fn t0_closed(&self, pis: &Pis, lv: &LeeVectors) -> Arr3 {
        let k = self.inv_2n();
        let k4 = &k * &r(1, 2);
        pis.p124
            .with_vector(&lv.a_star)
            .scale(&k4)
            .add(&pis.p[4].with_vector(&lv.a).scale(&k))
            .sub(&pis.p[4].with_vector(&lv.a_hat))
    }

    /// Torsion of the 18-parameter ansatz built on `ϑ₁, ϑ₂, ϑ₃`.
    pub fn ansatz(
        &self,
        lambda: &[Scalar; 18],
        theta_h: &[Scalar],
        theta_star: &[Scalar],
        omega: &[Scalar],
    ) -> Arr3 {
        let d = self.d;
        let (_, gp, gpp) = self.tables();
        let l = |i: usize| &lambda[i - 1];
        let th2 = self.form_phi(&self.form_phi(theta_h));
        let ts2 = self.form_phi(&self.form_phi(theta_star));
        let om1 = self.form_phi(omega);
        let th_xi = Frame::ev(theta_h, &self.xi);
        let ts_xi = Frame::ev(theta_star, &self.xi);
        // ϑ(x) = l[a]θ(φ²x) + l[b]θ(ξ)η(x) + l[c]ω(x) + l[a+1]θ*(φ²x) + l[b+1]θ*(ξ)η(x) + l[c+1]ω(φx)
        let vartheta = |b: usize| -> Vec<Scalar> {
            (0..d)
                .map(|x| {
                    let parts = [
                        l(b) * &th2[x],
                        l(b + 2) * &(&th_xi * &self.eta[x]),
                        l(b + 4) * &omega[x],
                        l(b + 1) * &ts2[x],
                        l(b + 3) * &(&ts_xi * &self.eta[x]),
                        l(b + 5) * &om1[x],
                    ];
                    parts.into_iter().sum()
                })
                .collect()
        };
        let (v1, v2, v3) = (vartheta(1), vartheta(7), vartheta(13));
        let et = &self.eta;
        let half = |x: usize, y: usize, z: usize| -> Scalar {
            &(&(&gpp[y][z] * &v1[x]) + &(&gp[y][z] * &v2[x])) + &(&(&et[y] * &et[z]) * &v3[x])
        };
        Arr3::from_fn(d, |x, y, z| &half(x, y, z) - &half(y, x, z))
    }

    /// `T` with `φ` applied in `slot`.
    pub fn phi_slot(&self, t: &Arr3, slot: usize) -> Arr3 {
        let d = self.d;
        Arr3::from_fn(d, |x, y, z| {
            let mut idx = [x, y, z];
            let j = idx[slot];
            (0..d)
                .filter(|&k| !self.phi[k][j].is_zero())
                .map(|k| {
                    idx[slot] = k;
                    &self.phi[k][j] * t.at(idx[0], idx[1], idx[2])
                })
                .sum()
        })
    }

    /// `T` with `ξ` in `slot`, the remaining two slots in order.
    pub fn xi_slot(&self, t: &Arr3, slot: usize) -> Vec<Vec<Scalar>> {
        let d = self.d;
        (0..d)
            .map(|a| {
                (0..d)
                    .map(|b| {
                        (0..d)
                            .map(|m| {
                                let idx = match slot {
                                    0 => [m, a, b],
                                    1 => [a, m, b],
                                    _ => [a, b, m],
                                };
                                &self.xi[m] * t.at(idx[0], idx[1], idx[2])
                            })
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }

    /// The φ-canonical identity: `{T(x,y,z) − T(x,φy,φz) − η(x){T(ξ,y,z) −
    /// T(ξ,φy,φz)} − η(y){T(x,ξ,z) − T(x,z,ξ) − η(x)T(z,ξ,ξ)}}_[y↔z] = 0`.
    pub fn canonical_identity(&self, t: &Arr3) -> bool {
        let d = self.d;
        let tpp = self.phi_slot(&self.phi_slot(t, 1), 2);
        let t_xi0 = self.xi_slot(t, 0);
        let tpp_xi0 = self.xi_slot(&tpp, 0);
        let t_xi1 = self.xi_slot(t, 1);
        let t_xi2 = self.xi_slot(t, 2);
        let t_hat: Vec<Scalar> = (0..d)
            .map(|z| (0..d).map(|m| &self.xi[m] * &t_xi1[z][m]).sum())
            .collect();
        let et = &self.eta;
        let a = |x: usize, y: usize, z: usize| -> Scalar {
            let first = t.at(x, y, z) - tpp.at(x, y, z);
            let second = &t_xi0[y][z] - &tpp_xi0[y][z];
            let third = &(&t_xi1[x][z] - &t_xi2[x][z]) - &(&et[x] * &t_hat[z]);
            &(&first - &(&et[x] * &second)) - &(&et[y] * &third)
        };
        (0..d).all(|x| (0..d).all(|y| (0..d).all(|z| (&a(x, y, z) - &a(x, z, y)).is_zero())))
    }

    /// `T(u,v,w)` for arbitrary vectors.
    pub fn eval3(&self, t: &Arr3, u: &[Scalar], v: &[Scalar], w: &[Scalar]) -> Scalar {
        let d = self.d;
        let mut acc = s(0);
        for i in 0..d {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if v[j].is_zero() {
                    continue;
                }
                let uv = &u[i] * &v[j];
                for k in 0..d {
                    if !w[k].is_zero() {
                        acc += &(&uv * &w[k]) * t.at(i, j, k);
                    }
                }
            }
        }
        acc
    }

    /// `t(x) = g^{ij}T(x,e_i,e_j)`, `t*(x) = g^{ij}T(x,e_i,φe_j)`, `t̂(x) = T(x,ξ,ξ)`.
    pub fn torsion_forms(&self, t: &Arr3) -> (Vec<Scalar>, Vec<Scalar>, Vec<Scalar>) {
        let d = self.d;
        let mut tt = vec![s(0); d];
        let mut ts = vec![s(0); d];
        let mut th = vec![s(0); d];
        for x in 0..d {
            for i in 0..d {
                for j in 0..d {
                    tt[x] += &self.gi[i][j] * t.at(x, i, j);
                    let tij: Scalar = (0..d).map(|k| &self.phi[k][j] * t.at(x, i, k)).sum();
                    ts[x] += &self.gi[i][j] * &tij;
                    th[x] += &(&self.xi[i] * &self.xi[j]) * t.at(x, i, j);
                }
            }
        }
        (tt, ts, th)
    }

    fn all_triples(&self, mut f: impl FnMut(&[Scalar], &[Scalar], &[Scalar]) -> bool) -> bool {
        let d = self.d;
        let basis: Vec<Vec<Scalar>> = (0..d).map(|i| self.e(i)).collect();
        (0..d).all(|x| (0..d).all(|y| (0..d).all(|z| f(&basis[x], &basis[y], &basis[z]))))
    }

    fn xi_conditions(&self, t: &Arr3) -> bool {
        let xi = &self.xi;
        self.all_triples(|x, y, _| {
            self.eval3(t, xi, x, y).is_zero() && self.eval3(t, x, y, xi).is_zero()
        })
    }

    /// `T(ξ,y,z) = T(x,y,ξ) = 0`, `T(x,y,z) = −T(φx,φy,z) = −T(x,φy,φz)`.
    pub fn in_t11(&self, t: &Arr3) -> bool {
        self.xi_conditions(t)
            && self.all_triples(|x, y, z| {
                let (px, py, pz) = (self.phi_v(x), self.phi_v(y), self.phi_v(z));
                let v = self.eval3(t, x, y, z);
                (&v + &self.eval3(t, &px, &py, z)).is_zero()
                    && (&v + &self.eval3(t, x, &py, &pz)).is_zero()
            })
    }

    /// `T(ξ,y,z) = T(x,y,ξ) = 0`, `T(x,y,z) = T(φx,φy,z)`, cyclic sum zero.
    pub fn in_t13(&self, t: &Arr3) -> bool {
        self.xi_conditions(t)
            && t.cyclic_sum_is_zero()
            && self.all_triples(|x, y, z| {
                self.eval3(t, x, y, z) == self.eval3(t, &self.phi_v(x), &self.phi_v(y), z)
            })
    }

    /// `T(x,y,z) = η(x)T(ξ,φ²y,φ²z) − η(y)T(ξ,φ²x,φ²z)`,
    /// `T(ξ,y,z) = T(ξ,z,y) = −T(ξ,φy,φz)`.
    pub fn in_t31(&self, t: &Arr3) -> bool {
        let xi = &self.xi;
        let p2 = |v: &[Scalar]| self.phi_v(&self.phi_v(v));
        self.all_triples(|x, y, z| {
            let rhs = &(&Frame::ev(&self.eta, x) * &self.eval3(t, xi, &p2(y), &p2(z)))
                - &(&Frame::ev(&self.eta, y) * &self.eval3(t, xi, &p2(x), &p2(z)));
            let a = self.eval3(t, xi, y, z);
            self.eval3(t, x, y, z) == rhs
                && a == self.eval3(t, xi, z, y)
                && (&a + &self.eval3(t, xi, &self.phi_v(y), &self.phi_v(z))).is_zero()
        })
    }

    /// `T(x,y,z) = η(z){η(y)t̂(x) − η(x)t̂(y)}`.
    pub fn in_t41(&self, t: &Arr3) -> bool {
        let (_, _, th) = self.torsion_forms(t);
        let et = &self.eta;
        let want = Arr3::from_fn(self.d, |x, y, z| {
            &et[z] * &(&(&et[y] * &th[x]) - &(&et[x] * &th[y]))
        });
        &want == t
    }
}

pub struct LeeVectors {
    pub a: Vec<Scalar>,
    pub a_star: Vec<Scalar>,
    pub a_hat: Vec<Scalar>,
}

/// The five π tensors and the sums the family uses.
pub struct Pis {
    pub p: [Arr4; 5],
    pub p35: Arr4,
    pub p24: Arr4,
    pub p124: Arr4,
}

impl Pis {
    pub fn new(fr: &Frame) -> Self {
        let p: [Arr4; 5] = std::array::from_fn(|k| fr.pi(k + 1));
        Pis {
            p35: p[2].add(&p[4]),
            p24: p[1].add(&p[3]),
            p124: p[0].add(&p[1]).add(&p[3]),
            p,
        }
    }
}
