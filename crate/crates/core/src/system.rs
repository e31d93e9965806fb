//! MLTI systems `X_{t+1} = A * X_t + B * U_t`, `Y_t = C * X_t`.

use crate::error::{Error, Result};
use crate::paired::{factored_power, PairedTensor};
use crate::shape::Shape;
use crate::tensor::DenseTensor;

/// Per-mode factor matrices of a system given in Tucker form, stored as
/// single-pair tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct TuckerFactors {
    pub a: Vec<PairedTensor<f64>>,
    pub b: Vec<PairedTensor<f64>>,
    pub c: Vec<PairedTensor<f64>>,
}

/// Operators with pairs `A: (J_n, J_n)`, `B: (J_n, K_n)`, `C: (I_n, J_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MltiSystem {
    a: PairedTensor<f64>,
    b: PairedTensor<f64>,
    c: PairedTensor<f64>,
    tucker: Option<TuckerFactors>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `X_0 ..= X_T`.
    pub states: Vec<DenseTensor>,
    /// `Y_0 ..= Y_T`.
    pub outputs: Vec<DenseTensor>,
    /// `U_0 .. U_T`.
    pub inputs: Vec<DenseTensor>,
}

impl MltiSystem {
    pub fn new(a: PairedTensor<f64>, b: PairedTensor<f64>, c: PairedTensor<f64>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::shape(
                "MltiSystem",
                format!("A has non-square pairs {:?}", a.pairs()),
            ));
        }
        let n = a.order();
        if b.order() != n || c.order() != n {
            return Err(Error::shape(
                "MltiSystem",
                format!(
                    "A has {n} pairs, B has {}, C has {}",
                    b.order(),
                    c.order()
                ),
            ));
        }
        for (mode, ((&(j, _), &(bj, _)), &(_, cj))) in
            a.pairs().iter().zip(b.pairs()).zip(c.pairs()).enumerate()
        {
            if bj != j {
                return Err(Error::shape(
                    "MltiSystem",
                    format!("B row extent {bj} at mode {mode} does not match state extent {j}"),
                ));
            }
            if cj != j {
                return Err(Error::shape(
                    "MltiSystem",
                    format!("C column extent {cj} at mode {mode} does not match state extent {j}"),
                ));
            }
        }
        Ok(MltiSystem {
            a,
            b,
            c,
            tucker: None,
        })
    }

    /// Builds `A = A_1 o ... o A_N` (and likewise `B`, `C`) from per-mode
    /// matrices, keeping the factors for the factored power path.
    pub fn from_tucker(
        a: Vec<PairedTensor<f64>>,
        b: Vec<PairedTensor<f64>>,
        c: Vec<PairedTensor<f64>>,
    ) -> Result<Self> {
        let n = a.len();
        if n == 0 || b.len() != n || c.len() != n {
            return Err(Error::shape(
                "from_tucker",
                format!(
                    "factor counts A={}, B={}, C={} must be equal and positive",
                    a.len(),
                    b.len(),
                    c.len()
                ),
            ));
        }
        for (name, factors) in [("A", &a), ("B", &b), ("C", &c)] {
            if let Some(mode) = factors.iter().position(|f| f.order() != 1) {
                return Err(Error::shape(
                    "from_tucker",
                    format!("{name} factor at mode {mode} is not a matrix"),
                ));
            }
        }
        for mode in 0..n {
            let (rows, cols) = a[mode].pairs()[0];
            if rows != cols {
                return Err(Error::shape(
                    "from_tucker",
                    format!("A factor at mode {mode} is {rows}x{cols}, expected square"),
                ));
            }
            let (b_rows, _) = b[mode].pairs()[0];
            if b_rows != rows {
                return Err(Error::shape(
                    "from_tucker",
                    format!("B factor at mode {mode} has {b_rows} rows, expected {rows}"),
                ));
            }
            let (_, c_cols) = c[mode].pairs()[0];
            if c_cols != rows {
                return Err(Error::shape(
                    "from_tucker",
                    format!("C factor at mode {mode} has {c_cols} columns, expected {rows}"),
                ));
            }
        }
        let mut sys = Self::new(
            PairedTensor::from_factors(&a)?,
            PairedTensor::from_factors(&b)?,
            PairedTensor::from_factors(&c)?,
        )?;
        sys.tucker = Some(TuckerFactors { a, b, c });
        Ok(sys)
    }

    pub fn a(&self) -> &PairedTensor<f64> {
        &self.a
    }

    pub fn b(&self) -> &PairedTensor<f64> {
        &self.b
    }

    pub fn c(&self) -> &PairedTensor<f64> {
        &self.c
    }

    pub fn tucker_factors(&self) -> Option<&TuckerFactors> {
        self.tucker.as_ref()
    }

    pub fn order(&self) -> usize {
        self.a.order()
    }

    pub fn state_shape(&self) -> Shape {
        self.a.row_shape()
    }

    pub fn input_shape(&self) -> Shape {
        self.b.col_shape()
    }

    pub fn output_shape(&self) -> Shape {
        self.c.row_shape()
    }

    /// `|J|`, the dimension of the state space.
    pub fn state_len(&self) -> usize {
        self.a.row_len()
    }

    /// Dual system `(A^T, C^T, B^T)`: reachability of one is observability
    /// of the other.
    pub fn dual(&self) -> MltiSystem {
        MltiSystem {
            a: self.a.u_transpose(),
            b: self.c.u_transpose(),
            c: self.b.u_transpose(),
            tucker: self.tucker.as_ref().map(|t| TuckerFactors {
                a: t.a.iter().map(|f| f.u_transpose()).collect(),
                b: t.c.iter().map(|f| f.u_transpose()).collect(),
                c: t.b.iter().map(|f| f.u_transpose()).collect(),
            }),
        }
    }

    /// `A^{*k}`, from the factors when the system is in Tucker form.
    pub fn power(&self, k: u32) -> Result<PairedTensor<f64>> {
        match &self.tucker {
            Some(t) => factored_power(&t.a, k),
            None => self.a.einstein_power(k),
        }
    }

    fn check_run(&self, x0: &DenseTensor, inputs: &[DenseTensor], steps: usize) -> Result<()> {
        if x0.shape() != &self.state_shape() {
            return Err(Error::shape(
                "simulate",
                format!(
                    "initial state has shape {:?}, state shape is {:?}",
                    x0.extents(),
                    self.state_shape().extents()
                ),
            ));
        }
        if inputs.len() < steps {
            return Err(Error::shape(
                "simulate",
                format!("{} inputs supplied for {steps} steps", inputs.len()),
            ));
        }
        let input_shape = self.input_shape();
        if let Some(t) = inputs[..steps].iter().position(|u| u.shape() != &input_shape) {
            return Err(Error::shape(
                "simulate",
                format!(
                    "input at time {t} has shape {:?}, input shape is {:?}",
                    inputs[t].extents(),
                    input_shape.extents()
                ),
            ));
        }
        Ok(())
    }

    /// Runs the state recursion for `steps` steps.
    pub fn simulate(&self, x0: &DenseTensor, inputs: &[DenseTensor], steps: usize) -> Result<Trajectory> {
        self.check_run(x0, inputs, steps)?;
        self.run(x0, inputs, steps, |x| self.a.einstein_apply(x), |u| self.b.einstein_apply(u), |x| {
            self.c.einstein_apply(x)
        })
    }

    /// Same recursion through Tucker products with the per-mode factors.
    pub fn simulate_factored(&self, x0: &DenseTensor, inputs: &[DenseTensor], steps: usize) -> Result<Trajectory> {
        let t = self.tucker.as_ref().ok_or_else(|| {
            Error::invalid("simulate_factored", "system was not built from Tucker factors")
        })?;
        self.check_run(x0, inputs, steps)?;
        self.run(x0, inputs, steps, |x| x.tucker_product(&t.a), |u| u.tucker_product(&t.b), |x| {
            x.tucker_product(&t.c)
        })
    }

    fn run(
        &self,
        x0: &DenseTensor,
        inputs: &[DenseTensor],
        steps: usize,
        apply_a: impl Fn(&DenseTensor) -> Result<DenseTensor>,
        apply_b: impl Fn(&DenseTensor) -> Result<DenseTensor>,
        apply_c: impl Fn(&DenseTensor) -> Result<DenseTensor>,
    ) -> Result<Trajectory> {
        let mut states = Vec::with_capacity(steps + 1);
        let mut outputs = Vec::with_capacity(steps + 1);
        states.push(x0.clone());
        outputs.push(apply_c(x0)?);
        for u in &inputs[..steps] {
            let x = states.last().expect("initial state present");
            let next = apply_a(x)?.add(&apply_b(u)?)?;
            outputs.push(apply_c(&next)?);
            states.push(next);
        }
        Ok(Trajectory {
            states,
            outputs,
            inputs: inputs[..steps].to_vec(),
        })
    }

    /// Closed form `X_k = A^{*k} * X_0 + sum_{j<k} A^{*(k-j-1)} * B * U_j`.
    pub fn solution_at(&self, x0: &DenseTensor, inputs: &[DenseTensor], k: usize) -> Result<DenseTensor> {
        self.check_run(x0, inputs, k)?;
        let mut x = self.power(k as u32)?.einstein_apply(x0)?;
        for (j, u) in inputs[..k].iter().enumerate() {
            let term = self
                .power((k - j - 1) as u32)?
                .einstein_apply(&self.b.einstein_apply(u)?)?;
            x = x.add(&term)?;
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::{random_paired, random_tensor, rng};
    use nalgebra::DMatrix;

    fn mat(rows: usize, cols: usize, row_major: &[f64]) -> PairedTensor<f64> {
        PairedTensor::from_matrix(&DMatrix::from_row_slice(rows, cols, row_major))
    }

    fn example() -> MltiSystem {
        MltiSystem::from_tucker(
            vec![
                mat(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.2, 0.5, 0.8]),
                mat(2, 2, &[0.0, 1.0, 0.5, 0.0]),
            ],
            vec![mat(3, 1, &[0.0, 0.0, 1.0]), mat(2, 1, &[0.0, 1.0])],
            vec![mat(1, 3, &[1.0, 0.0, 0.0]), mat(1, 2, &[1.0, 0.0])],
        )
        .unwrap()
    }

    fn zeros(extents: &[usize]) -> DenseTensor {
        DenseTensor::zeros(Shape::new(extents.to_vec()).unwrap())
    }

    #[test]
    fn from_tucker_validation() {
        let id2 = PairedTensor::from_matrix(&DMatrix::<f64>::identity(2, 2));
        let id3 = PairedTensor::from_matrix(&DMatrix::<f64>::identity(3, 3));
        let sys = MltiSystem::from_tucker(
            vec![id3.clone(), id2.clone()],
            vec![id3.clone(), id2.clone()],
            vec![id3.clone(), id2.clone()],
        )
        .unwrap();
        assert_eq!(sys.a(), &PairedTensor::u_identity(&[3, 2]));

        let err = MltiSystem::from_tucker(
            vec![id3.clone(), id2.clone()],
            vec![id2.clone(), id2.clone()],
            vec![id3.clone(), id2.clone()],
        )
        .unwrap_err();
        assert!(err.to_string().contains("B factor at mode 0"));
        assert!(MltiSystem::from_tucker(vec![id3.clone()], vec![], vec![]).is_err());
        let err = MltiSystem::from_tucker(
            vec![mat(2, 3, &[0.0; 6])],
            vec![id2.clone()],
            vec![id2],
        )
        .unwrap_err();
        assert!(err.to_string().contains("A factor at mode 0"));
    }

    #[test]
    fn single_mode_is_lti() {
        let a = mat(2, 2, &[0.5, 1.0, 0.0, 0.3]);
        let b = mat(2, 1, &[0.0, 1.0]);
        let c = mat(1, 2, &[1.0, 0.0]);
        let sys = MltiSystem::from_tucker(vec![a.clone()], vec![b.clone()], vec![c.clone()]).unwrap();
        assert_eq!(sys.a(), &a);
        let x0 = DenseTensor::from_extents(&[2], vec![1.0, -1.0]).unwrap();
        let u = vec![DenseTensor::from_extents(&[1], vec![2.0]).unwrap()];
        let traj = sys.simulate(&x0, &u, 1).unwrap();
        let am = a.phi();
        let expect = &am * nalgebra::DVector::from_vec(vec![1.0, -1.0]) + b.phi() * 2.0;
        assert_eq!(traj.states[1].data(), expect.as_slice());
    }

    #[test]
    fn new_rejects_incompatible_operators() {
        let mut r = rng(41);
        let a = random_paired(&mut r, &[(3, 3), (2, 2)]);
        let b = random_paired(&mut r, &[(2, 1), (2, 1)]);
        let c = random_paired(&mut r, &[(1, 3), (1, 2)]);
        assert!(MltiSystem::new(a.clone(), b, c.clone()).is_err());
        let b = random_paired(&mut r, &[(3, 1), (2, 1)]);
        assert!(MltiSystem::new(a.clone(), b.clone(), c).is_ok());
        assert!(MltiSystem::new(random_paired(&mut r, &[(3, 2)]), b.clone(), b).is_err());
    }

    #[test]
    fn zero_and_identity_trajectories() {
        let sys = example();
        let inputs = vec![zeros(&[1, 1]); 5];
        let traj = sys.simulate(&zeros(&[3, 2]), &inputs, 5).unwrap();
        assert_eq!(traj.states.len(), 6);
        assert_eq!(traj.outputs.len(), 6);
        assert_eq!(traj.inputs.len(), 5);
        assert!(traj.states.iter().all(|x| x.frobenius_norm() == 0.0));

        let mut r = rng(42);
        let a = PairedTensor::u_identity(&[3, 2]);
        let b = PairedTensor::zeros(vec![(3, 1), (2, 1)]);
        let c = random_paired(&mut r, &[(1, 3), (1, 2)]);
        let sys = MltiSystem::new(a, b, c).unwrap();
        let x0 = random_tensor(&mut r, &[3, 2]);
        let inputs: Vec<_> = (0..4).map(|_| random_tensor(&mut r, &[1, 1])).collect();
        let traj = sys.simulate(&x0, &inputs, 4).unwrap();
        assert!(traj.states.iter().all(|x| x == &x0));
    }

    #[test]
    fn impulse_response_matches_b() {
        let sys = example();
        let mut inputs = vec![zeros(&[1, 1]); 3];
        inputs[0] = DenseTensor::from_extents(&[1, 1], vec![1.0]).unwrap();
        let traj = sys.simulate(&zeros(&[3, 2]), &inputs, 3).unwrap();
        // X_1 is the single column of B: e_3 o e_2
        let mut expect = [0.0; 6];
        expect[2 + 3] = 1.0;
        assert_eq!(traj.states[1].data(), &expect[..]);
        for k in 0..=3 {
            let closed = sys.solution_at(&zeros(&[3, 2]), &inputs, k).unwrap();
            let diff = closed.sub(&traj.states[k]).unwrap().frobenius_norm();
            assert!(diff <= 1e-12, "k={k}");
        }
    }

    #[test]
    fn solution_at_cases() {
        let mut r = rng(43);
        let a = random_paired(&mut r, &[(2, 2), (3, 3)]).scale(0.4);
        let b = random_paired(&mut r, &[(2, 2), (3, 1)]);
        let c = random_paired(&mut r, &[(1, 2), (2, 3)]);
        let sys = MltiSystem::new(a.clone(), b, c).unwrap();
        let x0 = random_tensor(&mut r, &[2, 3]);
        let inputs: Vec<_> = (0..7).map(|_| random_tensor(&mut r, &[2, 1])).collect();
        assert_eq!(sys.solution_at(&x0, &inputs, 0).unwrap(), x0);

        let zero_in = vec![zeros(&[2, 1]); 7];
        let free = sys.solution_at(&x0, &zero_in, 5).unwrap();
        let expect = a.einstein_power(5).unwrap().einstein_apply(&x0).unwrap();
        assert!(free.sub(&expect).unwrap().frobenius_norm() <= 1e-14);

        let traj = sys.simulate(&x0, &inputs, 7).unwrap();
        let closed = sys.solution_at(&x0, &inputs, 7).unwrap();
        let diff = closed.sub(&traj.states[7]).unwrap().frobenius_norm();
        assert!(diff <= 1e-10 * (1.0 + traj.states[7].frobenius_norm()));
    }

    #[test]
    fn simulate_reports_bad_step() {
        let sys = example();
        let mut inputs = vec![zeros(&[1, 1]); 4];
        inputs[2] = zeros(&[2, 1]);
        let err = sys.simulate(&zeros(&[3, 2]), &inputs, 4).unwrap_err();
        assert!(err.to_string().contains("time 2"), "{err}");
        assert!(sys.simulate(&zeros(&[3, 2]), &inputs[..1], 4).is_err());
        assert!(sys.simulate(&zeros(&[2, 3]), &inputs, 0).is_err());
    }

    #[test]
    fn single_state_for_zero_steps() {
        let sys = example();
        let x0 = DenseTensor::from_extents(&[3, 2], vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let traj = sys.simulate(&x0, &[], 0).unwrap();
        assert_eq!(traj.states, vec![x0]);
        assert_eq!(traj.outputs[0].data(), &[1.0]);
    }

    #[test]
    fn factored_simulation_agrees() {
        let sys = example();
        let mut r = rng(44);
        let x0 = random_tensor(&mut r, &[3, 2]);
        let inputs: Vec<_> = (0..6).map(|_| random_tensor(&mut r, &[1, 1])).collect();
        let dense = sys.simulate(&x0, &inputs, 6).unwrap();
        let fact = sys.simulate_factored(&x0, &inputs, 6).unwrap();
        for (p, q) in dense.states.iter().zip(&fact.states) {
            assert!(p.sub(q).unwrap().frobenius_norm() <= 1e-12 * (1.0 + p.frobenius_norm()));
        }
        let plain = MltiSystem::new(sys.a().clone(), sys.b().clone(), sys.c().clone()).unwrap();
        assert!(plain.simulate_factored(&x0, &inputs, 6).is_err());
    }
}
