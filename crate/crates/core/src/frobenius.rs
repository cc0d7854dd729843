//! Graded commutative Frobenius algebras: finite graded basis, multiplication
//! structure constants, and a perfect graded pairing. Tensor powers carry
//! Koszul signs. The module also builds the diagonal class, the
//! comultiplication, and partition diagonals.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::chromatic::IntPolynomial;
use crate::exterior::koszul_permutation_sign;
use crate::field::{signed, Field, FieldError, FieldSpec};
use crate::graph::Partition;
use crate::homology::solve_dense;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid algebra: {0}")]
    Invalid(String),
    #[error("slot count mismatch ({left} vs {right})")]
    SlotMismatch { left: usize, right: usize },
    #[error("slot {slot} out of range for {slots} slots")]
    SlotOutOfRange { slot: usize, slots: usize },
    #[error("pullback slots must differ")]
    EqualSlots,
    #[error("partition of {covered} slots does not match tensor with {expected} slots")]
    PartitionSize { covered: usize, expected: usize },
    #[error("first partition does not refine the second")]
    NotRefinement,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Exact-coefficient linear combination of pure tensors of algebra basis
/// elements over a fixed slot count. No zero coefficients are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorElement<F: Field> {
    slots: usize,
    terms: BTreeMap<Vec<usize>, F>,
}

impl<F: Field> TensorElement<F> {
    pub fn zero(slots: usize) -> Self {
        TensorElement {
            slots,
            terms: BTreeMap::new(),
        }
    }

    pub fn pure(indices: Vec<usize>, coeff: F) -> Self {
        let mut t = TensorElement::zero(indices.len());
        t.add_term(indices, coeff);
        t
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, indices: &[usize]) -> Option<&F> {
        self.terms.get(indices)
    }

    pub fn add_term(&mut self, indices: Vec<usize>, coeff: F) {
        debug_assert_eq!(indices.len(), self.slots);
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&indices) {
            Some(slot) => {
                *slot += coeff;
                if slot.is_zero() {
                    self.terms.remove(&indices);
                }
            }
            None => {
                self.terms.insert(indices, coeff);
            }
        }
    }

    pub fn add(&self, other: &TensorElement<F>) -> TensorElement<F> {
        debug_assert_eq!(self.slots, other.slots);
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.add_term(idx.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &F) -> TensorElement<F> {
        let mut out = TensorElement::zero(self.slots);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), c.clone() * factor.clone());
        }
        out
    }
}

/// Graded commutative Frobenius algebra over the field `F`, described by a
/// finite basis. All invariants (unit law, associativity, graded
/// commutativity, the Frobenius identity, perfection of the pairing) are
/// checked eagerly at construction, and the diagonal class and
/// comultiplication table are precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusAlgebra<F: Field> {
    labels: Vec<String>,
    degrees: Vec<usize>,
    unit: usize,
    /// `mult[i][j]` is the expansion of `a_i * a_j`, sorted by basis index.
    mult: Vec<Vec<Vec<(usize, F)>>>,
    /// `pairing[i][j] = <a_i, a_j>`.
    pairing: Vec<Vec<F>>,
    pairing_degree: usize,
    /// Columns of the inverse Gram matrix: `dual basis a^i = Σ_j inv[j][i] a_j`.
    pairing_inv: Vec<Vec<F>>,
    diagonal: TensorElement<F>,
    comult: Vec<TensorElement<F>>,
    one: F,
}

impl<F: Field> FrobeniusAlgebra<F> {
    pub fn new(
        labels: Vec<String>,
        degrees: Vec<usize>,
        unit: usize,
        mult: Vec<Vec<Vec<(usize, F)>>>,
        pairing: Vec<Vec<F>>,
        pairing_degree: usize,
        params: &F::Params,
    ) -> Result<Self, AlgebraError> {
        let one = F::from_int(params, 1);
        let dim = labels.len();
        if dim == 0 {
            return Err(AlgebraError::Invalid("empty basis".into()));
        }
        if degrees.len() != dim || mult.len() != dim || pairing.len() != dim {
            return Err(AlgebraError::Invalid("inconsistent table sizes".into()));
        }
        if mult.iter().any(|row| row.len() != dim) || pairing.iter().any(|row| row.len() != dim) {
            return Err(AlgebraError::Invalid("inconsistent table sizes".into()));
        }
        if unit >= dim {
            return Err(AlgebraError::Invalid("unit index out of range".into()));
        }
        if degrees[unit] != 0 {
            return Err(AlgebraError::Invalid(format!(
                "unit `{}` must have degree 0",
                labels[unit]
            )));
        }
        let mut mult = mult;
        for row in mult.iter_mut().flatten() {
            row.retain(|(_, c)| !c.is_zero());
            row.sort_by_key(|(k, _)| *k);
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(AlgebraError::Invalid("duplicate product term".into()));
            }
            if row.iter().any(|(k, _)| *k >= dim) {
                return Err(AlgebraError::Invalid(
                    "product references unknown basis index".into(),
                ));
            }
        }
        let mut algebra = FrobeniusAlgebra {
            labels,
            degrees,
            unit,
            mult,
            pairing,
            pairing_degree,
            pairing_inv: Vec::new(),
            diagonal: TensorElement::zero(2),
            comult: Vec::new(),
            one,
        };
        algebra.validate()?;
        algebra.pairing_inv = algebra.invert_pairing()?;
        algebra.diagonal = algebra.solve_diagonal()?;
        algebra.comult = (0..dim)
            .map(|i| {
                let x = TensorElement::pure(vec![i, algebra.unit], algebra.one.clone());
                algebra
                    .tensor_multiply(&x, &algebra.diagonal)
                    .expect("slot counts agree")
            })
            .collect();
        Ok(algebra)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let dim = self.dim();
        let fail = |msg: String| Err(AlgebraError::Invalid(msg));
        // degree homogeneity of products
        for i in 0..dim {
            for j in 0..dim {
                for (k, _) in &self.mult[i][j] {
                    if self.degrees[*k] != self.degrees[i] + self.degrees[j] {
                        return fail(format!(
                            "product {}*{} has a term of wrong degree",
                            self.labels[i], self.labels[j]
                        ));
                    }
                }
            }
        }
        // unit law on both sides
        for i in 0..dim {
            let expected = vec![(i, self.one.clone())];
            if self.mult[self.unit][i] != expected || self.mult[i][self.unit] != expected {
                return fail(format!("unit law fails on `{}`", self.labels[i]));
            }
        }
        // graded commutativity
        for i in 0..dim {
            for j in 0..dim {
                let sign = if self.degrees[i] * self.degrees[j] % 2 == 0 {
                    1
                } else {
                    -1
                };
                let flipped: Vec<(usize, F)> = self.mult[j][i]
                    .iter()
                    .map(|(k, c)| (*k, signed(sign, c.clone())))
                    .collect();
                if self.mult[i][j] != flipped {
                    return fail(format!(
                        "graded commutativity fails on {}*{}",
                        self.labels[i], self.labels[j]
                    ));
                }
            }
        }
        // associativity
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let mut left = vec![F::zero(); dim];
                    for (t, c) in &self.mult[i][j] {
                        for (s, d) in &self.mult[*t][k] {
                            left[*s] += c.clone() * d.clone();
                        }
                    }
                    let mut right = vec![F::zero(); dim];
                    for (t, c) in &self.mult[j][k] {
                        for (s, d) in &self.mult[i][*t] {
                            right[*s] += c.clone() * d.clone();
                        }
                    }
                    if left != right {
                        return fail(format!(
                            "associativity fails on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        ));
                    }
                }
            }
        }
        // pairing degree window and graded symmetry
        for i in 0..dim {
            for j in 0..dim {
                if self.degrees[i] + self.degrees[j] != self.pairing_degree
                    && !self.pairing[i][j].is_zero()
                {
                    return fail(format!(
                        "pairing <{},{}> nonzero outside degree {}",
                        self.labels[i], self.labels[j], self.pairing_degree
                    ));
                }
                let sign = if self.degrees[i] * self.degrees[j] % 2 == 0 {
                    1
                } else {
                    -1
                };
                if self.pairing[i][j] != signed(sign, self.pairing[j][i].clone()) {
                    return fail(format!(
                        "pairing not graded symmetric on <{},{}>",
                        self.labels[i], self.labels[j]
                    ));
                }
            }
        }
        // Frobenius identity <ab, c> = <a, bc>
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let mut left = F::zero();
                    for (t, c) in &self.mult[i][j] {
                        left += c.clone() * self.pairing[*t][k].clone();
                    }
                    let mut right = F::zero();
                    for (t, c) in &self.mult[j][k] {
                        right += self.pairing[i][*t].clone() * c.clone();
                    }
                    if left != right {
                        return fail(format!(
                            "Frobenius identity fails on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Inverse Gram matrix; fails when the pairing is singular.
    fn invert_pairing(&self) -> Result<Vec<Vec<F>>, AlgebraError> {
        let dim = self.dim();
        let gram: Vec<Vec<F>> = self.pairing.clone();
        let mut inv = vec![vec![F::zero(); dim]; dim];
        for i in 0..dim {
            let mut e = vec![F::zero(); dim];
            e[i] = self.one.clone();
            let col = solve_dense(gram.clone(), e).ok_or_else(|| {
                AlgebraError::Invalid("pairing is not perfect (singular Gram matrix)".into())
            })?;
            for (j, v) in col.into_iter().enumerate() {
                inv[j][i] = v;
            }
        }
        Ok(inv)
    }

    /// Solves `<a ⊗ b, Δ> = <ab, 1>` for the diagonal class.
    fn solve_diagonal(&self) -> Result<TensorElement<F>, AlgebraError> {
        let dim = self.dim();
        let n2 = dim * dim;
        let mut gram = vec![vec![F::zero(); n2]; n2];
        let mut rhs = vec![F::zero(); n2];
        for i in 0..dim {
            for j in 0..dim {
                let row = i * dim + j;
                for k in 0..dim {
                    for l in 0..dim {
                        let sign = if self.degrees[j] * self.degrees[k] % 2 == 0 {
                            1
                        } else {
                            -1
                        };
                        let v = self.pairing[i][k].clone() * self.pairing[j][l].clone();
                        gram[row][k * dim + l] = signed(sign, v);
                    }
                }
                for (t, c) in &self.mult[i][j] {
                    rhs[row] += c.clone() * self.pairing[*t][self.unit].clone();
                }
            }
        }
        let x = solve_dense(gram, rhs).ok_or_else(|| {
            AlgebraError::Invalid("pairing is not perfect on the tensor square".into())
        })?;
        let mut delta = TensorElement::zero(2);
        for k in 0..dim {
            for l in 0..dim {
                delta.add_term(vec![k, l], x[k * dim + l].clone());
            }
        }
        Ok(delta)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn pairing_degree(&self) -> usize {
        self.pairing_degree
    }

    pub fn basis_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn product(&self, i: usize, j: usize) -> &[(usize, F)] {
        &self.mult[i][j]
    }

    pub fn pairing(&self, i: usize, j: usize) -> &F {
        &self.pairing[i][j]
    }

    /// The field's one, usable as a witness for deriving new scalars.
    pub fn one(&self) -> &F {
        &self.one
    }

    pub fn scalar(&self, n: i64) -> F {
        self.one.embed(n)
    }

    /// Total degree of a pure tensor given by basis indices.
    pub fn tuple_degree(&self, indices: &[usize]) -> usize {
        indices.iter().map(|&i| self.degrees[i]).sum()
    }

    /// `Σ_i q^{deg a_i}`, the graded dimension as an integer polynomial.
    pub fn graded_dimension(&self) -> IntPolynomial {
        let mut acc = IntPolynomial::zero();
        for &d in &self.degrees {
            acc = acc.add(&IntPolynomial::monomial(1, d));
        }
        acc
    }

    /// Unit of `A^{⊗slots}`.
    pub fn unit_tensor(&self, slots: usize) -> TensorElement<F> {
        TensorElement::pure(vec![self.unit; slots], self.one.clone())
    }

    /// Slotwise product with the Koszul sign
    /// `(-1)^{Σ_{p<q} deg y_p · deg x_q}` per pair of pure terms.
    pub fn tensor_multiply(
        &self,
        x: &TensorElement<F>,
        y: &TensorElement<F>,
    ) -> Result<TensorElement<F>, AlgebraError> {
        if x.slots != y.slots {
            return Err(AlgebraError::SlotMismatch {
                left: x.slots,
                right: y.slots,
            });
        }
        let mut out = TensorElement::zero(x.slots);
        for (u, c) in &x.terms {
            for (v, d) in &y.terms {
                let mut odd_crossings = 0usize;
                for p in 0..x.slots {
                    for q in p + 1..x.slots {
                        odd_crossings += self.degrees[v[p]] * self.degrees[u[q]];
                    }
                }
                let sign = if odd_crossings % 2 == 0 { 1 } else { -1 };
                let base = signed(sign, c.clone() * d.clone());
                let mut partial: Vec<(Vec<usize>, F)> = vec![(Vec::with_capacity(x.slots), base)];
                for k in 0..x.slots {
                    let mut next = Vec::with_capacity(partial.len());
                    for (tuple, w) in &partial {
                        for (t, s) in &self.mult[u[k]][v[k]] {
                            let mut tuple = tuple.clone();
                            tuple.push(*t);
                            next.push((tuple, w.clone() * s.clone()));
                        }
                    }
                    partial = next;
                    if partial.is_empty() {
                        break;
                    }
                }
                for (tuple, w) in partial {
                    out.add_term(tuple, w);
                }
            }
        }
        Ok(out)
    }

    /// The n-fold graded product pairing, iterating the two-slot rule
    /// `<a⊗b, c⊗d> = (-1)^{deg b deg c} <a,c><b,d>`.
    pub fn tensor_pairing(
        &self,
        x: &TensorElement<F>,
        y: &TensorElement<F>,
    ) -> Result<F, AlgebraError> {
        if x.slots != y.slots {
            return Err(AlgebraError::SlotMismatch {
                left: x.slots,
                right: y.slots,
            });
        }
        let mut acc = F::zero();
        for (u, c) in &x.terms {
            'terms: for (v, d) in &y.terms {
                let mut value = c.clone() * d.clone();
                for k in 0..x.slots {
                    let p = &self.pairing[u[k]][v[k]];
                    if p.is_zero() {
                        continue 'terms;
                    }
                    value *= p.clone();
                }
                let mut odd_crossings = 0usize;
                for p in 0..x.slots {
                    for q in p + 1..x.slots {
                        odd_crossings += self.degrees[v[p]] * self.degrees[u[q]];
                    }
                }
                acc += signed(if odd_crossings % 2 == 0 { 1 } else { -1 }, value);
            }
        }
        Ok(acc)
    }

    /// The diagonal class `Δ ∈ A ⊗ A`, the unique solution of
    /// `<a ⊗ b, Δ> = <ab, 1>`.
    pub fn diagonal(&self) -> &TensorElement<F> {
        &self.diagonal
    }

    /// Comultiplication of a basis element: `μ*(a) = (a ⊗ 1) Δ`.
    pub fn comultiply_basis(&self, i: usize) -> &TensorElement<F> {
        &self.comult[i]
    }

    /// Comultiplication of a one-slot element, extended linearly.
    pub fn comultiply(&self, x: &TensorElement<F>) -> Result<TensorElement<F>, AlgebraError> {
        if x.slots != 1 {
            return Err(AlgebraError::SlotMismatch {
                left: x.slots,
                right: 1,
            });
        }
        let mut out = TensorElement::zero(2);
        for (idx, c) in &x.terms {
            for (t, d) in &self.comult[idx[0]].terms {
                out.add_term(t.clone(), c.clone() * d.clone());
            }
        }
        Ok(out)
    }

    /// Reorders tensor slots: `order[k]` is the old slot placed at position
    /// `k`. Carries the Koszul sign of the permutation on graded factors.
    pub fn permute_slots(&self, x: &TensorElement<F>, order: &[usize]) -> TensorElement<F> {
        debug_assert_eq!(order.len(), x.slots);
        let mut out = TensorElement::zero(x.slots);
        for (u, c) in &x.terms {
            let degrees: Vec<usize> = u.iter().map(|&i| self.degrees[i]).collect();
            let sign = koszul_permutation_sign(&degrees, order);
            let tuple: Vec<usize> = order.iter().map(|&o| u[o]).collect();
            out.add_term(tuple, signed(sign, c.clone()));
        }
        out
    }

    /// Places the factors of a `k`-slot element at strictly increasing
    /// `positions` in an `n`-slot tensor, with units elsewhere.
    pub fn scatter_slots(
        &self,
        x: &TensorElement<F>,
        positions: &[usize],
        n: usize,
    ) -> Result<TensorElement<F>, AlgebraError> {
        debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
        if positions.len() != x.slots {
            return Err(AlgebraError::SlotMismatch {
                left: positions.len(),
                right: x.slots,
            });
        }
        if let Some(&max) = positions.last() {
            if max >= n {
                return Err(AlgebraError::SlotOutOfRange {
                    slot: max,
                    slots: n,
                });
            }
        }
        let mut out = TensorElement::zero(n);
        for (u, c) in &x.terms {
            let mut tuple = vec![self.unit; n];
            for (k, &pos) in positions.iter().enumerate() {
                tuple[pos] = u[k];
            }
            // the skipped slots hold units of degree 0, so no sign
            out.add_term(tuple, c.clone());
        }
        Ok(out)
    }

    /// Block multiplication `Ψ(P → V): A^{⊗n} → A^{⊗|P|}`: slots are sorted
    /// into block order (Koszul sign) and multiplied within each block.
    pub fn block_collapse(
        &self,
        x: &TensorElement<F>,
        p: &Partition,
    ) -> Result<TensorElement<F>, AlgebraError> {
        if p.n_vertices() != x.slots {
            return Err(AlgebraError::PartitionSize {
                covered: p.n_vertices(),
                expected: x.slots,
            });
        }
        let order: Vec<usize> = p.blocks().iter().flatten().copied().collect();
        let sorted = self.permute_slots(x, &order);
        let mut out = TensorElement::zero(p.len());
        for (u, c) in &sorted.terms {
            let mut partial: Vec<(Vec<usize>, F)> = vec![(Vec::new(), c.clone())];
            let mut offset = 0usize;
            for block in p.blocks() {
                let mut block_products: Vec<(usize, F)> = vec![(u[offset], self.one.clone())];
                for k in 1..block.len() {
                    let mut next: Vec<(usize, F)> = Vec::new();
                    for (i, w) in &block_products {
                        for (t, s) in &self.mult[*i][u[offset + k]] {
                            next.push((*t, w.clone() * s.clone()));
                        }
                    }
                    block_products = next;
                }
                let mut next_partial = Vec::new();
                for (tuple, w) in &partial {
                    for (i, s) in &block_products {
                        let mut tuple = tuple.clone();
                        tuple.push(*i);
                        next_partial.push((tuple, w.clone() * s.clone()));
                    }
                }
                partial = next_partial;
                offset += block.len();
            }
            for (tuple, w) in partial {
                out.add_term(tuple, w);
            }
        }
        Ok(out)
    }

    /// The partition diagonal `Δ_P ∈ A^{⊗n}`: the element dual to block
    /// multiplication, i.e. `<u, Δ_P> = <Ψ_P(u), 1>` for all pure tensors.
    pub fn diagonal_partition(
        &self,
        p: &Partition,
        n: usize,
    ) -> Result<TensorElement<F>, AlgebraError> {
        if p.n_vertices() != n {
            return Err(AlgebraError::PartitionSize {
                covered: p.n_vertices(),
                expected: n,
            });
        }
        let dim = self.dim();
        let unit_target = self.unit_tensor(p.len());
        let mut out = TensorElement::zero(n);
        let mut tuple = vec![0usize; n];
        loop {
            let phi = {
                let u = TensorElement::pure(tuple.clone(), self.one.clone());
                let collapsed = self.block_collapse(&u, p)?;
                self.tensor_pairing(&collapsed, &unit_target)?
            };
            if !phi.is_zero() {
                // dual of the pure tensor: tensor of slotwise dual-basis
                // vectors, normalized so it pairs to 1 against the tuple
                let dual_degrees: Vec<usize> = tuple
                    .iter()
                    .map(|&i| self.pairing_degree - self.degrees[i])
                    .collect();
                let mut odd = 0usize;
                for a in 0..n {
                    for b in a + 1..n {
                        odd += dual_degrees[a] * self.degrees[tuple[b]];
                    }
                }
                let norm = signed(if odd % 2 == 0 { 1 } else { -1 }, phi);
                let mut expansion: Vec<(Vec<usize>, F)> = vec![(Vec::new(), norm)];
                for &i in &tuple {
                    let mut next = Vec::new();
                    for (word, w) in &expansion {
                        for j in 0..dim {
                            let c = &self.pairing_inv[j][i];
                            if c.is_zero() {
                                continue;
                            }
                            let mut word = word.clone();
                            word.push(j);
                            next.push((word, w.clone() * c.clone()));
                        }
                    }
                    expansion = next;
                }
                for (word, w) in expansion {
                    out.add_term(word, w);
                }
            }
            // next tuple in lexicographic order
            let mut k = n;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                tuple[k] += 1;
                if tuple[k] < dim {
                    break;
                }
                tuple[k] = 0;
            }
        }
    }

    /// The relative diagonal `Δ_{Q,P} ∈ A^{⊗|Q|}` for a refinement `Q` of
    /// `P`: the partition diagonal of `P` viewed as a partition of the blocks
    /// of `Q`.
    pub fn relative_diagonal(
        &self,
        q: &Partition,
        p: &Partition,
    ) -> Result<TensorElement<F>, AlgebraError> {
        let refines = q.refines(p).map_err(|_| AlgebraError::PartitionSize {
            covered: q.n_vertices(),
            expected: p.n_vertices(),
        })?;
        if !refines {
            return Err(AlgebraError::NotRefinement);
        }
        let mut owner = vec![0usize; p.n_vertices()];
        for (bi, block) in p.blocks().iter().enumerate() {
            for &v in block {
                owner[v] = bi;
            }
        }
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); p.len()];
        for (qi, qblock) in q.blocks().iter().enumerate() {
            groups[owner[qblock[0]]].push(qi);
        }
        groups.retain(|g| !g.is_empty());
        let coarse = Partition::new(groups, q.len())
            .expect("blocks of a refinement partition its index set");
        self.diagonal_partition(&coarse, q.len())
    }

    /// `p_a^*(x)`: places a one-slot element into slot `a` of `A^{⊗n}`.
    pub fn pullback_slot(
        &self,
        x: &TensorElement<F>,
        slot: usize,
        n: usize,
    ) -> Result<TensorElement<F>, AlgebraError> {
        if x.slots != 1 {
            return Err(AlgebraError::SlotMismatch {
                left: x.slots,
                right: 1,
            });
        }
        self.scatter_slots(x, &[slot], n)
    }

    /// `p_{a,b}^*(Δ)`: places the two legs of the diagonal class in slots
    /// `a` and `b` of `A^{⊗n}` (Koszul sign when `a > b`).
    pub fn pullback_pair_diagonal(
        &self,
        a: usize,
        b: usize,
        n: usize,
    ) -> Result<TensorElement<F>, AlgebraError> {
        if a == b {
            return Err(AlgebraError::EqualSlots);
        }
        if a >= n || b >= n {
            return Err(AlgebraError::SlotOutOfRange {
                slot: a.max(b),
                slots: n,
            });
        }
        if a < b {
            return self.scatter_slots(&self.diagonal, &[a, b], n);
        }
        let mut swapped = TensorElement::zero(2);
        for (t, c) in &self.diagonal.terms {
            let sign = if self.degrees[t[0]] * self.degrees[t[1]] % 2 == 0 {
                1
            } else {
                -1
            };
            swapped.add_term(vec![t[1], t[0]], signed(sign, c.clone()));
        }
        self.scatter_slots(&swapped, &[b, a], n)
    }

    /// Formats a tensor as `c1 * x⊗y + ...` with basis labels.
    pub fn format_tensor(&self, x: &TensorElement<F>) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (idx, c) in &x.terms {
            let word: Vec<&str> = idx.iter().map(|&i| self.labels[i].as_str()).collect();
            parts.push(format!("{} * {}", c, word.join("⊗")));
        }
        parts.join(" + ")
    }
}

// ---------------------------------------------------------------------------
// built-in algebras

impl<F: Field> FrobeniusAlgebra<F> {
    /// Cohomology of the `d`-sphere: basis `{1, x}` with `x² = 0` and
    /// `<1, x> = 1`.
    pub fn sphere(d: usize, params: &F::Params) -> Self {
        let one = F::from_int(params, 1);
        let z = F::zero();
        let mult = vec![
            vec![vec![(0, one.clone())], vec![(1, one.clone())]],
            vec![vec![(1, one.clone())], vec![]],
        ];
        let pairing = vec![vec![z.clone(), one.clone()], vec![one.clone(), z]];
        FrobeniusAlgebra::new(
            vec!["1".into(), "x".into()],
            vec![0, d],
            0,
            mult,
            pairing,
            d,
            params,
        )
        .expect("sphere algebra is valid")
    }

    /// Cohomology of the complex projective plane: basis `{1, h, h2}`,
    /// `h·h = h2`, pairing degree 4.
    pub fn complex_projective_plane(params: &F::Params) -> Self {
        let one = F::from_int(params, 1);
        let z = F::zero();
        let mult = vec![
            vec![
                vec![(0, one.clone())],
                vec![(1, one.clone())],
                vec![(2, one.clone())],
            ],
            vec![vec![(1, one.clone())], vec![(2, one.clone())], vec![]],
            vec![vec![(2, one.clone())], vec![], vec![]],
        ];
        let pairing = vec![
            vec![z.clone(), z.clone(), one.clone()],
            vec![z.clone(), one.clone(), z.clone()],
            vec![one.clone(), z.clone(), z.clone()],
        ];
        FrobeniusAlgebra::new(
            vec!["1".into(), "h".into(), "h2".into()],
            vec![0, 2, 4],
            0,
            mult,
            pairing,
            4,
            params,
        )
        .expect("projective plane algebra is valid")
    }

    /// Cohomology of the 2-torus: basis `{1, a, b, ab}` with odd-degree
    /// generators `a, b`; the Koszul-sign stress test.
    pub fn torus(params: &F::Params) -> Self {
        let one = F::from_int(params, 1);
        let neg = F::from_int(params, -1);
        let z = F::zero();
        let mult = vec![
            // 1 * -
            vec![
                vec![(0, one.clone())],
                vec![(1, one.clone())],
                vec![(2, one.clone())],
                vec![(3, one.clone())],
            ],
            // a * -
            vec![
                vec![(1, one.clone())],
                vec![],
                vec![(3, one.clone())],
                vec![],
            ],
            // b * -
            vec![
                vec![(2, one.clone())],
                vec![(3, neg.clone())],
                vec![],
                vec![],
            ],
            // ab * -
            vec![vec![(3, one.clone())], vec![], vec![], vec![]],
        ];
        let pairing = vec![
            vec![z.clone(), z.clone(), z.clone(), one.clone()],
            vec![z.clone(), z.clone(), one.clone(), z.clone()],
            vec![z.clone(), neg.clone(), z.clone(), z.clone()],
            vec![one.clone(), z.clone(), z.clone(), z.clone()],
        ];
        FrobeniusAlgebra::new(
            vec!["1".into(), "a".into(), "b".into(), "ab".into()],
            vec![0, 1, 1, 2],
            0,
            mult,
            pairing,
            2,
            params,
        )
        .expect("torus algebra is valid")
    }

    /// The ground field itself: one basis element, pairing degree 0.
    pub fn ground_field(params: &F::Params) -> Self {
        let one = F::from_int(params, 1);
        FrobeniusAlgebra::new(
            vec!["1".into()],
            vec![0],
            0,
            vec![vec![vec![(0, one.clone())]]],
            vec![vec![one]],
            0,
            params,
        )
        .expect("ground field algebra is valid")
    }

    /// Built-in algebra by CLI name: `s2`, `s4`, `cp2`, `t2`, `ground`.
    pub fn builtin(name: &str, params: &F::Params) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "s2" => Some(Self::sphere(2, params)),
            "s4" => Some(Self::sphere(4, params)),
            "cp2" => Some(Self::complex_projective_plane(params)),
            "t2" => Some(Self::torus(params)),
            "ground" => Some(Self::ground_field(params)),
            _ => None,
        }
    }

    pub const BUILTIN_NAMES: [&'static str; 5] = ["s2", "s4", "cp2", "t2", "ground"];
}

// ---------------------------------------------------------------------------
// text format

/// Reads the `field` header of an algebra file without materializing it.
pub fn parse_algebra_field(src: &str) -> Result<FieldSpec, AlgebraError> {
    for (lineno, raw) in src.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut parts = content.split_whitespace();
        if parts.next() == Some("field") {
            let rest: Vec<&str> = parts.collect();
            return FieldSpec::parse(&rest.join(" ")).map_err(|e| AlgebraError::Parse {
                line: lineno + 1,
                message: e.to_string(),
            });
        }
        break;
    }
    Err(AlgebraError::Parse {
        line: 1,
        message: "missing `field` header".into(),
    })
}

/// Parses the algebra text format:
///
/// ```text
/// field Q
/// pairing_degree 2
/// basis 1:0 x:2
/// unit 1
/// mul 1 1 = 1
/// mul 1 x = x
/// pair 1 x = 1
/// ```
///
/// Unspecified products and pairings default to zero; graded commutativity
/// fills the unstated triangle, and conflicts between stated values are
/// errors.
pub fn parse_algebra<F: Field>(
    src: &str,
    params: &F::Params,
) -> Result<FrobeniusAlgebra<F>, AlgebraError> {
    let mut pairing_degree: Option<usize> = None;
    let mut basis: Vec<(String, usize)> = Vec::new();
    let mut unit: Option<(String, usize)> = None;
    let mut muls: Vec<(usize, String, String, Vec<(F, String)>)> = Vec::new();
    let mut pairs: Vec<(usize, String, String, F)> = Vec::new();

    let parse_coeff = |tok: &str, line: usize| -> Result<F, AlgebraError> {
        let make = |n: i64, d: i64| {
            F::from_ratio(params, n, d).map_err(|e| AlgebraError::Parse {
                line,
                message: e.to_string(),
            })
        };
        match tok.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| AlgebraError::Parse {
                    line,
                    message: format!("invalid coefficient `{tok}`"),
                })?;
                let d: i64 = d.trim().parse().map_err(|_| AlgebraError::Parse {
                    line,
                    message: format!("invalid coefficient `{tok}`"),
                })?;
                make(n, d)
            }
            None => {
                let n: i64 = tok.trim().parse().map_err(|_| AlgebraError::Parse {
                    line,
                    message: format!("invalid coefficient `{tok}`"),
                })?;
                make(n, 1)
            }
        }
    };

    for (lineno, raw) in src.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut parts = content.split_whitespace();
        let head = parts.next().unwrap();
        match head {
            "field" => {
                // consumed by parse_algebra_field; validated for consistency here
                let rest: Vec<&str> = parts.collect();
                FieldSpec::parse(&rest.join(" ")).map_err(|e| AlgebraError::Parse {
                    line,
                    message: e.to_string(),
                })?;
            }
            "pairing_degree" => {
                let d: usize = parts.next().and_then(|t| t.parse().ok()).ok_or_else(|| {
                    AlgebraError::Parse {
                        line,
                        message: "expected `pairing_degree d`".into(),
                    }
                })?;
                pairing_degree = Some(d);
            }
            "basis" => {
                for tok in parts {
                    let (name, deg) = tok.split_once(':').ok_or_else(|| AlgebraError::Parse {
                        line,
                        message: format!("expected `name:degree`, got `{tok}`"),
                    })?;
                    let deg: usize = deg.parse().map_err(|_| AlgebraError::Parse {
                        line,
                        message: format!("invalid degree in `{tok}`"),
                    })?;
                    if basis.iter().any(|(n, _)| n == name) {
                        return Err(AlgebraError::Parse {
                            line,
                            message: format!("duplicate basis name `{name}`"),
                        });
                    }
                    basis.push((name.to_string(), deg));
                }
            }
            "unit" => {
                let name = parts.next().ok_or_else(|| AlgebraError::Parse {
                    line,
                    message: "expected `unit name`".into(),
                })?;
                unit = Some((name.to_string(), line));
            }
            "mul" => {
                let (a, b) = match (parts.next(), parts.next(), parts.next()) {
                    (Some(a), Some(b), Some("=")) => (a.to_string(), b.to_string()),
                    _ => {
                        return Err(AlgebraError::Parse {
                            line,
                            message: "expected `mul a b = ...`".into(),
                        })
                    }
                };
                let rhs: String = parts.collect::<Vec<&str>>().join(" ");
                let mut terms: Vec<(F, String)> = Vec::new();
                if rhs.trim() != "0" {
                    for piece in rhs.replace('-', "+-").split('+') {
                        let piece = piece.trim();
                        if piece.is_empty() {
                            continue;
                        }
                        let (coeff, name) = match piece.split_once('*') {
                            Some((c, n)) => (parse_coeff(c.trim(), line)?, n.trim().to_string()),
                            None => {
                                let (c, n) = if let Some(rest) = piece.strip_prefix('-') {
                                    (F::from_int(params, -1), rest.trim().to_string())
                                } else {
                                    (F::from_int(params, 1), piece.to_string())
                                };
                                (c, n)
                            }
                        };
                        terms.push((coeff, name));
                    }
                }
                muls.push((line, a, b, terms));
            }
            "pair" => {
                let (a, b) = match (parts.next(), parts.next(), parts.next()) {
                    (Some(a), Some(b), Some("=")) => (a.to_string(), b.to_string()),
                    _ => {
                        return Err(AlgebraError::Parse {
                            line,
                            message: "expected `pair a b = c`".into(),
                        })
                    }
                };
                let c = parts.next().ok_or_else(|| AlgebraError::Parse {
                    line,
                    message: "expected a coefficient".into(),
                })?;
                pairs.push((line, a, b, parse_coeff(c, line)?));
            }
            other => {
                return Err(AlgebraError::Parse {
                    line,
                    message: format!("unknown directive `{other}`"),
                })
            }
        }
    }

    let dim = basis.len();
    if dim == 0 {
        return Err(AlgebraError::Invalid("no basis declared".into()));
    }
    let degrees: Vec<usize> = basis.iter().map(|(_, d)| *d).collect();
    let labels: Vec<String> = basis.iter().map(|(n, _)| n.clone()).collect();
    let index_of = |name: &str, line: usize| -> Result<usize, AlgebraError> {
        labels
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| AlgebraError::Parse {
                line,
                message: format!("unknown basis element `{name}`"),
            })
    };
    let (unit_name, unit_line) =
        unit.ok_or_else(|| AlgebraError::Invalid("missing `unit` line".into()))?;
    let unit_idx = index_of(&unit_name, unit_line)?;
    let pairing_degree =
        pairing_degree.ok_or_else(|| AlgebraError::Invalid("missing `pairing_degree`".into()))?;

    let mut mult: Vec<Vec<Option<Vec<(usize, F)>>>> = vec![vec![None; dim]; dim];
    for (line, a, b, terms) in muls {
        let (i, j) = (index_of(&a, line)?, index_of(&b, line)?);
        let mut row: Vec<(usize, F)> = Vec::new();
        for (c, name) in terms {
            let k = index_of(&name, line)?;
            row.push((k, c));
        }
        row.sort_by_key(|(k, _)| *k);
        if mult[i][j].is_some() {
            return Err(AlgebraError::Parse {
                line,
                message: format!("product `{a} {b}` stated twice"),
            });
        }
        mult[i][j] = Some(row);
    }
    // fill the unstated triangle by graded commutativity; detect conflicts
    for i in 0..dim {
        for j in 0..dim {
            if mult[i][j].is_some() {
                continue;
            }
            if let Some(other) = mult[j][i].clone() {
                let sign = if degrees[i] * degrees[j] % 2 == 0 {
                    1
                } else {
                    -1
                };
                mult[i][j] = Some(
                    other
                        .into_iter()
                        .map(|(k, c)| (k, signed(sign, c)))
                        .collect(),
                );
            }
        }
    }
    let mult: Vec<Vec<Vec<(usize, F)>>> = mult
        .into_iter()
        .map(|row| row.into_iter().map(|e| e.unwrap_or_default()).collect())
        .collect();

    let mut pairing: Vec<Vec<Option<F>>> = vec![vec![None; dim]; dim];
    for (line, a, b, c) in pairs {
        let (i, j) = (index_of(&a, line)?, index_of(&b, line)?);
        if pairing[i][j].is_some() {
            return Err(AlgebraError::Parse {
                line,
                message: format!("pairing `{a} {b}` stated twice"),
            });
        }
        pairing[i][j] = Some(c);
    }
    for i in 0..dim {
        for j in 0..dim {
            if pairing[i][j].is_some() {
                continue;
            }
            if let Some(other) = pairing[j][i].clone() {
                let sign = if degrees[i] * degrees[j] % 2 == 0 {
                    1
                } else {
                    -1
                };
                pairing[i][j] = Some(signed(sign, other));
            }
        }
    }
    let pairing: Vec<Vec<F>> = pairing
        .into_iter()
        .map(|row| row.into_iter().map(|e| e.unwrap_or_else(F::zero)).collect())
        .collect();

    FrobeniusAlgebra::new(
        labels,
        degrees,
        unit_idx,
        mult,
        pairing,
        pairing_degree,
        params,
    )
}
