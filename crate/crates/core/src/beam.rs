//! Euler-Bernoulli beam finite elements: 2-node bending elements with
//! transverse displacement and rotation DOFs, Hermite cubic shape
//! functions, damaged global assembly, static solve, and nodal
//! extreme-fiber strain extraction.
//!
//! Sign conventions: transverse displacement is positive in the
//! direction of the applied load, and strains are reported as
//! extreme-fiber magnitudes `(h/2)·|v″|`, which makes a downward tip
//! load produce positive tensile values along the beam.

use alloc::vec;
use alloc::vec::Vec;

use crate::damage::DamageScenario;
use crate::error::{Error, Result};
use crate::linalg::{lu_solve, DenseMatrix, DenseVector};

/// Boundary-condition kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    /// Node 1 clamped: v = 0 and θ = 0.
    Cantilever,
    /// v = 0 at both end nodes; end rotations free.
    SimplySupported,
}

/// Geometry, material, mesh, load, and boundary conditions of a
/// rectangular-section beam.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamSpec {
    /// Total length L (m).
    pub length_m: f64,
    /// Cross-section width b (m).
    pub width_m: f64,
    /// Cross-section height h (m).
    pub height_m: f64,
    /// Young's modulus E (Pa).
    pub youngs_modulus_pa: f64,
    /// Number of equal-length elements.
    pub n_elements: usize,
    /// Point load P (N), positive in the displacement direction.
    pub load_newton: f64,
    /// 1-based node index where P is applied.
    pub load_node: usize,
    pub support: Support,
}

impl BeamSpec {
    /// The tip-loaded cantilever used throughout validation:
    /// L = 0.2 m, b = 0.02 m, h = 0.01 m, E = 200 GPa, 8 elements,
    /// P = 100 N at the free end.
    pub fn reference_cantilever() -> Self {
        Self {
            length_m: 0.2,
            width_m: 0.02,
            height_m: 0.01,
            youngs_modulus_pa: 200e9,
            n_elements: 8,
            load_newton: 100.0,
            load_node: 9,
            support: Support::Cantilever,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length_m > 0.0 && self.width_m > 0.0 && self.height_m > 0.0) {
            return Err(Error::InvalidGeometry("beam dimensions must be positive"));
        }
        if !(self.youngs_modulus_pa > 0.0) {
            return Err(Error::InvalidGeometry("Young's modulus must be positive"));
        }
        if self.n_elements < 1 {
            return Err(Error::InvalidGeometry("at least one element required"));
        }
        if self.load_node < 1 || self.load_node > self.n_nodes() {
            return Err(Error::InvalidGeometry("load node outside the mesh"));
        }
        if !self.load_newton.is_finite() {
            return Err(Error::NonFinite("load"));
        }
        Ok(())
    }

    pub fn n_nodes(&self) -> usize {
        self.n_elements + 1
    }

    /// Two DOFs per node: (v, θ).
    pub fn n_dofs(&self) -> usize {
        2 * self.n_nodes()
    }

    pub fn element_length(&self) -> f64 {
        self.length_m / self.n_elements as f64
    }

    /// Second moment of area I = b·h³/12.
    pub fn second_moment(&self) -> f64 {
        self.width_m * self.height_m * self.height_m * self.height_m / 12.0
    }

    /// Flexural rigidity EI.
    pub fn flexural_rigidity(&self) -> f64 {
        self.youngs_modulus_pa * self.second_moment()
    }

    /// 0-based indices of the constrained DOFs.
    fn constrained_dofs(&self) -> Vec<usize> {
        match self.support {
            Support::Cantilever => vec![0, 1],
            Support::SimplySupported => vec![0, 2 * self.n_elements],
        }
    }
}

/// Nodal response of a static solve.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticResponse {
    /// Transverse displacement per node (m), positive in the load direction.
    pub displacements_m: Vec<f64>,
    /// Slope per node (rad).
    pub rotations_rad: Vec<f64>,
    /// Extreme-fiber strain magnitude per node at z = h/2 (m/m).
    pub strains: Vec<f64>,
}

/// Closed-form 4×4 bending stiffness of a 2-node Hermite cubic element,
/// DOF order (v₁, θ₁, v₂, θ₂):
///
/// ```text
/// (EI/len³) · | 12    6len  -12    6len  |
///             | 6len  4len² -6len  2len² |
///             | -12  -6len   12   -6len  |
///             | 6len  2len² -6len  4len² |
/// ```
pub fn element_stiffness(ei: f64, len: f64) -> Result<DenseMatrix> {
    if !(ei > 0.0) || !ei.is_finite() {
        return Err(Error::InvalidGeometry("flexural rigidity must be positive"));
    }
    if !(len > 0.0) || !len.is_finite() {
        return Err(Error::InvalidGeometry("element length must be positive"));
    }
    let c = ei / (len * len * len);
    let l = len;
    let l2 = len * len;
    DenseMatrix::new(
        4,
        4,
        vec![
            12.0 * c,
            6.0 * l * c,
            -12.0 * c,
            6.0 * l * c,
            6.0 * l * c,
            4.0 * l2 * c,
            -6.0 * l * c,
            2.0 * l2 * c,
            -12.0 * c,
            -6.0 * l * c,
            12.0 * c,
            -6.0 * l * c,
            6.0 * l * c,
            2.0 * l2 * c,
            -6.0 * l * c,
            4.0 * l2 * c,
        ],
    )
}

/// Assembles the global stiffness matrix with each element's block
/// scaled by its stiffness reduction factor.
pub fn assemble_global(spec: &BeamSpec, scenario: &DamageScenario) -> Result<DenseMatrix> {
    spec.validate()?;
    if scenario.factors().len() != spec.n_elements {
        return Err(Error::DimensionMismatch {
            what: "damage factors",
            expected: spec.n_elements,
            actual: scenario.factors().len(),
        });
    }
    let ke = element_stiffness(spec.flexural_rigidity(), spec.element_length())?;
    let n_dofs = spec.n_dofs();
    let mut k = DenseMatrix::zeros(n_dofs, n_dofs);
    for (e, &ee) in scenario.factors().iter().enumerate() {
        let base = 2 * e;
        for i in 0..4 {
            for j in 0..4 {
                k[(base + i, base + j)] += ee * ke[(i, j)];
            }
        }
    }
    Ok(k)
}

/// Global load vector: P at the transverse DOF of the load node.
pub fn load_vector(spec: &BeamSpec) -> DenseVector {
    let mut f = DenseVector::zeros(spec.n_dofs());
    f[2 * (spec.load_node - 1)] = spec.load_newton;
    f
}

/// Removes the rows and columns of constrained DOFs.
///
/// Returns the reduced matrix, the reduced load vector, and the 0-based
/// indices of the retained DOFs, which map the reduced solution back to
/// full-length vectors with exact zeros at the constraints.
pub fn apply_boundary_conditions(
    k: &DenseMatrix,
    f: &DenseVector,
    spec: &BeamSpec,
) -> Result<(DenseMatrix, DenseVector, Vec<usize>)> {
    let n_dofs = spec.n_dofs();
    if k.rows() != n_dofs || k.cols() != n_dofs {
        return Err(Error::DimensionMismatch {
            what: "global stiffness",
            expected: n_dofs,
            actual: k.rows(),
        });
    }
    if f.len() != n_dofs {
        return Err(Error::DimensionMismatch {
            what: "global load vector",
            expected: n_dofs,
            actual: f.len(),
        });
    }
    let constrained = spec.constrained_dofs();
    let retained: Vec<usize> = (0..n_dofs).filter(|d| !constrained.contains(d)).collect();
    let m = retained.len();
    let mut kr = DenseMatrix::zeros(m, m);
    let mut fr = DenseVector::zeros(m);
    for (i, &di) in retained.iter().enumerate() {
        fr[i] = f[di];
        for (j, &dj) in retained.iter().enumerate() {
            kr[(i, j)] = k[(di, dj)];
        }
    }
    Ok((kr, fr, retained))
}

/// Solves the reduced static system and reconstructs the full nodal
/// response, including extreme-fiber strains.
pub fn solve_static(spec: &BeamSpec, scenario: &DamageScenario) -> Result<StaticResponse> {
    let k = assemble_global(spec, scenario)?;
    let f = load_vector(spec);
    let (kr, fr, retained) = apply_boundary_conditions(&k, &f, spec)?;
    let dr = lu_solve(&kr, &fr)?;

    let mut full = vec![0.0; spec.n_dofs()];
    for (i, &d) in retained.iter().enumerate() {
        full[d] = dr[i];
    }
    let n_nodes = spec.n_nodes();
    let displacements_m: Vec<f64> = (0..n_nodes).map(|n| full[2 * n]).collect();
    let rotations_rad: Vec<f64> = (0..n_nodes).map(|n| full[2 * n + 1]).collect();
    let strains = nodal_strain(spec, &displacements_m, &rotations_rad)?;
    Ok(StaticResponse {
        displacements_m,
        rotations_rad,
        strains,
    })
}

/// Extreme-fiber strain magnitude `(h/2)·|v″|` per node.
///
/// The curvature field of the Hermite interpolant is discontinuous
/// across elements, so a convention is needed: node i ∈ [1, n] is
/// evaluated at the left end of element i, and node n+1 at the right
/// end of element n. For the undamaged tip-load case both sides agree
/// to machine precision.
pub fn nodal_strain(
    spec: &BeamSpec,
    displacements_m: &[f64],
    rotations_rad: &[f64],
) -> Result<Vec<f64>> {
    let n_nodes = spec.n_nodes();
    if displacements_m.len() != n_nodes {
        return Err(Error::DimensionMismatch {
            what: "displacement vector",
            expected: n_nodes,
            actual: displacements_m.len(),
        });
    }
    if rotations_rad.len() != n_nodes {
        return Err(Error::DimensionMismatch {
            what: "rotation vector",
            expected: n_nodes,
            actual: rotations_rad.len(),
        });
    }
    let len = spec.element_length();
    let half_h = spec.height_m / 2.0;
    let mut strains = Vec::with_capacity(n_nodes);
    for node in 0..spec.n_elements {
        // Left end of the element whose left node this is.
        let v1 = displacements_m[node];
        let t1 = rotations_rad[node];
        let v2 = displacements_m[node + 1];
        let t2 = rotations_rad[node + 1];
        let curvature = curvature_left(len, v1, t1, v2, t2);
        strains.push(half_h * libm::fabs(curvature));
    }
    // Last node: right end of the last element.
    let n = spec.n_elements;
    let curvature = curvature_right(
        len,
        displacements_m[n - 1],
        rotations_rad[n - 1],
        displacements_m[n],
        rotations_rad[n],
    );
    strains.push(half_h * libm::fabs(curvature));
    Ok(strains)
}

/// Hermite cubic curvature v″ at the left end of an element.
pub fn curvature_left(len: f64, v1: f64, t1: f64, v2: f64, t2: f64) -> f64 {
    let l2 = len * len;
    (-6.0 / l2) * v1 + (-4.0 / len) * t1 + (6.0 / l2) * v2 + (-2.0 / len) * t2
}

/// Hermite cubic curvature v″ at the right end of an element.
pub fn curvature_right(len: f64, v1: f64, t1: f64, v2: f64, t2: f64) -> f64 {
    let l2 = len * len;
    (6.0 / l2) * v1 + (2.0 / len) * t1 + (-6.0 / l2) * v2 + (4.0 / len) * t2
}

/// Closed-form response of an undamaged tip-loaded cantilever:
/// v(x) = Px²(3L−x)/(6EI), θ(x) = Px(2L−x)/(2EI),
/// ε(x) = P(L−x)(h/2)/(EI).
///
/// Used as the analytic oracle for the FEM path; only the cantilever
/// with the load at the tip node is covered.
pub fn exact_cantilever_response(spec: &BeamSpec) -> Result<StaticResponse> {
    spec.validate()?;
    if spec.support != Support::Cantilever {
        return Err(Error::UnsupportedCase(
            "closed form covers the cantilever only",
        ));
    }
    if spec.load_node != spec.n_nodes() {
        return Err(Error::UnsupportedCase(
            "closed form covers a tip load only",
        ));
    }
    let ei = spec.flexural_rigidity();
    let p = spec.load_newton;
    let l = spec.length_m;
    let half_h = spec.height_m / 2.0;
    let n_nodes = spec.n_nodes();
    let mut displacements_m = Vec::with_capacity(n_nodes);
    let mut rotations_rad = Vec::with_capacity(n_nodes);
    let mut strains = Vec::with_capacity(n_nodes);
    for node in 0..n_nodes {
        // node/n is exactly 1 at the tip, so x lands exactly on L and
        // the free-end strain comes out as a true zero.
        let x = l * (node as f64 / spec.n_elements as f64);
        displacements_m.push(p * x * x * (3.0 * l - x) / (6.0 * ei));
        rotations_rad.push(p * x * (2.0 * l - x) / (2.0 * ei));
        strains.push(p * (l - x) * half_h / ei);
    }
    Ok(StaticResponse {
        displacements_m,
        rotations_rad,
        strains,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::damage::DamageScenario;

    fn undamaged(n: usize) -> DamageScenario {
        DamageScenario::undamaged(n)
    }

    // Oracle: symbolic integration of EI·∫N″ᵢN″ⱼ dx for the Hermite
    // cubics with EI = 1, len = 1, done by hand before the build.
    #[test]
    fn unit_element_stiffness() {
        let k = element_stiffness(1.0, 1.0).unwrap();
        let expected = [
            [12.0, 6.0, -12.0, 6.0],
            [6.0, 4.0, -6.0, 2.0],
            [-12.0, -6.0, 12.0, -6.0],
            [6.0, 2.0, -6.0, 4.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(k[(i, j)], expected[i][j], "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn stiffness_linear_in_rigidity() {
        let k1 = element_stiffness(2.5, 0.75).unwrap();
        let k2 = element_stiffness(5.0, 0.75).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(k2[(i, j)], 2.0 * k1[(i, j)]);
            }
        }
    }

    #[test]
    fn stiffness_symmetric_with_rigid_body_null_space() {
        let k = element_stiffness(333.0, 0.025).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(k[(i, j)], k[(j, i)]);
            }
        }
        // Rigid translation (1, 0, 1, 0) maps to zero force.
        for i in 0..4 {
            let f = k[(i, 0)] + k[(i, 2)];
            assert!(f.abs() < 1e-9 * k[(0, 0)].abs(), "row {i}: {f}");
        }
    }

    #[test]
    fn stiffness_rejects_bad_geometry() {
        assert!(matches!(
            element_stiffness(0.0, 1.0),
            Err(Error::InvalidGeometry(_))
        ));
        assert!(matches!(
            element_stiffness(1.0, -2.0),
            Err(Error::InvalidGeometry(_))
        ));
    }

    // Oracle: hand superposition of two element blocks; the middle 2×2
    // of the 6×6 global is element 1's lower-right plus element 2's
    // upper-left.
    #[test]
    fn two_element_assembly_superposes_blocks() {
        let mut spec = BeamSpec::reference_cantilever();
        spec.n_elements = 2;
        spec.load_node = 3;
        let k = assemble_global(&spec, &undamaged(2)).unwrap();
        assert_eq!(k.rows(), 6);
        let ke = element_stiffness(spec.flexural_rigidity(), spec.element_length()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(k[(2 + i, 2 + j)], ke[(2 + i, 2 + j)] + ke[(i, j)]);
            }
        }
        // Off-diagonal coupling blocks come from a single element each.
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(k[(i, 2 + j)], ke[(i, 2 + j)]);
                assert_eq!(k[(4 + i, 2 + j)], ke[(2 + i, j)]);
            }
        }
    }

    #[test]
    fn uniform_half_damage_halves_global() {
        let spec = BeamSpec::reference_cantilever();
        let k_full = assemble_global(&spec, &undamaged(8)).unwrap();
        let k_half = assemble_global(&spec, &DamageScenario::new(vec![0.5; 8]).unwrap()).unwrap();
        for i in 0..k_full.rows() {
            for j in 0..k_full.cols() {
                assert_eq!(k_half[(i, j)], 0.5 * k_full[(i, j)]);
            }
        }
    }

    #[test]
    fn all_ones_scenario_matches_undamaged() {
        let spec = BeamSpec::reference_cantilever();
        let a = assemble_global(&spec, &undamaged(8)).unwrap();
        let b = assemble_global(&spec, &DamageScenario::new(vec![1.0; 8]).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn assembly_rejects_wrong_scenario_length() {
        let spec = BeamSpec::reference_cantilever();
        assert!(matches!(
            assemble_global(&spec, &undamaged(7)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn cantilever_reduction_removes_two_dofs() {
        let spec = BeamSpec::reference_cantilever();
        let k = assemble_global(&spec, &undamaged(8)).unwrap();
        let f = load_vector(&spec);
        let (kr, fr, retained) = apply_boundary_conditions(&k, &f, &spec).unwrap();
        assert_eq!(kr.rows(), 16);
        assert_eq!(kr.cols(), 16);
        assert_eq!(fr.len(), 16);
        assert_eq!(retained.len(), 16);
        assert!(!retained.contains(&0));
        assert!(!retained.contains(&1));
    }

    #[test]
    fn simply_supported_reduction_keeps_end_rotations() {
        let mut spec = BeamSpec::reference_cantilever();
        spec.support = Support::SimplySupported;
        spec.load_node = 5;
        let k = assemble_global(&spec, &undamaged(8)).unwrap();
        let f = load_vector(&spec);
        let (kr, _, retained) = apply_boundary_conditions(&k, &f, &spec).unwrap();
        assert_eq!(kr.rows(), 16);
        assert!(!retained.contains(&0));
        assert!(!retained.contains(&16));
        assert!(retained.contains(&1));
        assert!(retained.contains(&17));
    }

    #[test]
    fn clamped_node_has_exact_zeros() {
        let spec = BeamSpec::reference_cantilever();
        let r = solve_static(&spec, &undamaged(8)).unwrap();
        assert_eq!(r.displacements_m[0], 0.0);
        assert_eq!(r.rotations_rad[0], 0.0);
    }

    // Table values for the reference cantilever: tip displacement
    // PL³/3EI = 8.000e-4 m, node-2 displacement 0.1796875e-4 m.
    #[test]
    fn reference_displacements_match_closed_form() {
        let spec = BeamSpec::reference_cantilever();
        let r = solve_static(&spec, &undamaged(8)).unwrap();
        assert!((r.displacements_m[8] - 8.000e-4).abs() < 1e-12);
        assert!((r.displacements_m[1] - 1.796875e-5).abs() < 1e-12);
    }

    // Reference strains: root 3.000e-4, midspan 1.500e-4, free end 0.
    #[test]
    fn reference_strains_match_closed_form() {
        let spec = BeamSpec::reference_cantilever();
        let r = solve_static(&spec, &undamaged(8)).unwrap();
        assert!((r.strains[0] - 3.000e-4).abs() < 1e-12);
        assert!((r.strains[4] - 1.500e-4).abs() < 1e-12);
        assert!(r.strains[8].abs() < 1e-12);
    }

    #[test]
    fn uniform_half_damage_doubles_displacements() {
        let spec = BeamSpec::reference_cantilever();
        let base = solve_static(&spec, &undamaged(8)).unwrap();
        let half = solve_static(&spec, &DamageScenario::new(vec![0.5; 8]).unwrap()).unwrap();
        for (d, b) in half.displacements_m.iter().zip(&base.displacements_m) {
            assert_eq!(*d, 2.0 * b);
        }
    }

    #[test]
    fn strains_scale_linearly_with_load() {
        let spec = BeamSpec::reference_cantilever();
        let mut doubled = spec.clone();
        doubled.load_newton = 200.0;
        let a = solve_static(&spec, &undamaged(8)).unwrap();
        let b = solve_static(&doubled, &undamaged(8)).unwrap();
        for (sa, sb) in a.strains.iter().zip(&b.strains) {
            assert_eq!(*sb, 2.0 * sa);
        }
    }

    #[test]
    fn exact_response_anchors() {
        let spec = BeamSpec::reference_cantilever();
        let r = exact_cantilever_response(&spec).unwrap();
        assert!((r.displacements_m[8] - 8.000e-4).abs() < 1e-19);
        assert!((r.strains[0] - 3.000e-4).abs() < 1e-19);
        assert_eq!(r.strains[8], 0.0);
        assert_eq!(r.displacements_m[0], 0.0);
    }

    #[test]
    fn exact_response_rejects_unsupported_cases() {
        let mut spec = BeamSpec::reference_cantilever();
        spec.support = Support::SimplySupported;
        assert!(matches!(
            exact_cantilever_response(&spec),
            Err(Error::UnsupportedCase(_))
        ));
        let mut spec = BeamSpec::reference_cantilever();
        spec.load_node = 4;
        assert!(matches!(
            exact_cantilever_response(&spec),
            Err(Error::UnsupportedCase(_))
        ));
    }

    #[test]
    fn spec_validation() {
        let mut spec = BeamSpec::reference_cantilever();
        spec.load_node = 10;
        assert!(spec.validate().is_err());
        let mut spec = BeamSpec::reference_cantilever();
        spec.height_m = 0.0;
        assert!(spec.validate().is_err());
        let mut spec = BeamSpec::reference_cantilever();
        spec.n_elements = 0;
        assert!(spec.validate().is_err());
    }
}
