//! Finite quivers and bound quiver algebras `kQ/I` with an explicit path
//! basis and multiplication table.
//!
//! Paths compose left to right: for arrows `a: i → j` and `b: j → k` the
//! path `a*b` runs from `i` to `k`. Right modules are then covariant
//! representations.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// `arrows` are `(name, from, to)` with vertex labels.
    pub fn new(vertices: Vec<String>, arrows: Vec<(String, String, String)>) -> Result<Self> {
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::InvalidQuiver(format!("duplicate vertex label {v:?}")));
            }
        }
        let mut q = Quiver {
            vertices,
            arrows: Vec::new(),
        };
        for (name, from, to) in arrows {
            if q.arrows.iter().any(|a| a.name == name) {
                return Err(Error::InvalidQuiver(format!("duplicate arrow name {name:?}")));
            }
            let source = q.vertex(&from)?;
            let target = q.vertex(&to)?;
            q.arrows.push(Arrow {
                name,
                source,
                target,
            });
        }
        Ok(q)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, label: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn arrow(&self, name: &str) -> Result<usize> {
        self.arrows
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }
}

/// A path of the quiver: a trivial path at `source`, or a composable
/// sequence of arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }
}

/// A k-linear combination of parallel paths, all of length at least 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(Scalar, Vec<usize>)>,
}

/// `kQ/I` for an admissible ideal `I`, truncated at paths of length
/// `max_path_length + 1`; construction fails unless every path of length
/// `max_path_length` already vanishes.
#[derive(Clone)]
pub struct BoundAlgebra {
    quiver: Quiver,
    field: Field,
    relations: Vec<Relation>,
    max_path_length: usize,
    basis: Vec<Path>,
    // products of basis elements as sparse coordinate vectors
    mult: Vec<Vec<Vec<(usize, Scalar)>>>,
    between: Vec<Vec<Vec<usize>>>,
    idempotents: Vec<usize>,
    arrow_basis: Vec<Option<usize>>,
}

impl PartialEq for BoundAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.max_path_length == other.max_path_length
            && self.quiver == other.quiver
            && self.relations == other.relations
    }
}

impl Eq for BoundAlgebra {}

impl fmt::Debug for BoundAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BoundAlgebra({} vertices, {} arrows, dim {}, over {})",
            self.quiver.num_vertices(),
            self.quiver.arrows.len(),
            self.dim(),
            self.field
        )
    }
}

impl BoundAlgebra {
    /// Builds `kQ/I`, enumerating paths by increasing length and reducing
    /// modulo the ideal generated by `relations`.
    pub fn new(
        quiver: Quiver,
        relations: Vec<Relation>,
        field: Field,
        max_path_length: usize,
    ) -> Result<Self> {
        if max_path_length == 0 {
            return Err(Error::InvalidRelation("max_path_length must be positive".into()));
        }
        let paths = enumerate_paths(&quiver, max_path_length);
        let index: HashMap<(usize, Vec<usize>), usize> = paths
            .iter()
            .enumerate()
            .map(|(i, p)| ((p.source, p.arrows.clone()), i))
            .collect();

        for (r, rel) in relations.iter().enumerate() {
            validate_relation(&quiver, field, r, rel)?;
        }

        // Column order: longest paths first, so echelon pivots land on the
        // longest paths and the surviving basis consists of short ones.
        let mut order: Vec<usize> = (0..paths.len()).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(paths[i].len()), i));
        let column_of: Vec<usize> = {
            let mut c = vec![0; paths.len()];
            for (col, &i) in order.iter().enumerate() {
                c[i] = col;
            }
            c
        };

        let mut generators: Vec<Vec<Scalar>> = Vec::new();
        for rel in &relations {
            let (s, t) = relation_endpoints(&quiver, rel);
            let min_len = rel.terms.iter().map(|(_, w)| w.len()).min().unwrap_or(0);
            for u in paths.iter().filter(|u| u.target == s) {
                for v in paths.iter().filter(|v| v.source == t) {
                    if u.len() + min_len + v.len() > max_path_length {
                        continue;
                    }
                    let mut row = vec![field.zero(); paths.len()];
                    for (c, w) in &rel.terms {
                        let mut arrows = u.arrows.clone();
                        arrows.extend(w);
                        arrows.extend(&v.arrows);
                        if arrows.len() > max_path_length {
                            continue;
                        }
                        let i = index[&(u.source, arrows)];
                        row[column_of[i]] += c;
                    }
                    generators.push(row);
                }
            }
        }
        let ideal = Matrix::from_rows(field, generators, paths.len())?.rref();
        let reduced_rows: Vec<(usize, Vec<Scalar>)> = ideal
            .pivots
            .iter()
            .enumerate()
            .map(|(r, &p)| (p, ideal.reduced.row(r).to_vec()))
            .collect();
        let reduce = |mut v: Vec<Scalar>| -> Vec<Scalar> {
            for (p, row) in &reduced_rows {
                if v[*p].is_zero() {
                    continue;
                }
                let c = v[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &(&c * y);
                    }
                }
            }
            v
        };

        for (i, p) in paths.iter().enumerate() {
            if p.len() != max_path_length {
                continue;
            }
            let mut e = vec![field.zero(); paths.len()];
            e[column_of[i]] = field.one();
            if reduce(e).iter().any(|x| !x.is_zero()) {
                return Err(Error::NonAdmissible {
                    path: path_name(&quiver, p),
                    length: max_path_length,
                });
            }
        }

        let pivot_set: Vec<bool> = {
            let mut s = vec![false; paths.len()];
            for &p in &ideal.pivots {
                s[p] = true;
            }
            s
        };
        let basis_paths: Vec<usize> = (0..paths.len())
            .filter(|&i| !pivot_set[column_of[i]])
            .collect();
        let basis_index_of_column: HashMap<usize, usize> = basis_paths
            .iter()
            .enumerate()
            .map(|(b, &i)| (column_of[i], b))
            .collect();
        let normal_form = |i: usize| -> Vec<(usize, Scalar)> {
            let mut e = vec![field.zero(); paths.len()];
            e[column_of[i]] = field.one();
            reduce(e)
                .into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(col, x)| (basis_index_of_column[&col], x))
                .collect()
        };

        let basis: Vec<Path> = basis_paths.iter().map(|&i| paths[i].clone()).collect();
        let n = basis.len();
        let mut mult = vec![vec![Vec::new(); n]; n];
        for s in 0..n {
            for t in 0..n {
                let (a, b) = (&basis[s], &basis[t]);
                if a.target != b.source || a.len() + b.len() > max_path_length {
                    continue;
                }
                let mut arrows = a.arrows.clone();
                arrows.extend(&b.arrows);
                mult[s][t] = normal_form(index[&(a.source, arrows)]);
            }
        }

        let nv = quiver.num_vertices();
        let mut between = vec![vec![Vec::new(); nv]; nv];
        for (b, p) in basis.iter().enumerate() {
            between[p.source][p.target].push(b);
        }
        let idempotents = (0..nv)
            .map(|v| {
                basis
                    .iter()
                    .position(|p| p.is_trivial() && p.source == v)
                    .ok_or_else(|| Error::InvalidRelation(format!("idempotent at vertex {v} vanishes")))
            })
            .collect::<Result<Vec<_>>>()?;
        let arrow_basis = (0..quiver.arrows.len())
            .map(|a| basis.iter().position(|p| p.arrows == [a]))
            .collect();

        let alg = BoundAlgebra {
            quiver,
            field,
            relations,
            max_path_length,
            basis,
            mult,
            between,
            idempotents,
            arrow_basis,
        };
        alg.check_structure()?;
        Ok(alg)
    }

    /// The ground field as a one-vertex algebra; its modules are k-vector spaces.
    pub fn ground(field: Field) -> Self {
        let quiver = Quiver::new(vec!["k".into()], vec![]).expect("valid quiver");
        BoundAlgebra::new(quiver, vec![], field, 1).expect("ground field algebra")
    }

    fn check_structure(&self) -> Result<()> {
        let n = self.dim();
        let one: Vec<Scalar> = {
            let mut v = vec![self.field.zero(); n];
            for &e in &self.idempotents {
                v[e] = self.field.one();
            }
            v
        };
        for s in 0..n {
            let e = self.unit_vector(s);
            if self.mul(&one, &e) != e || self.mul(&e, &one) != e {
                return Err(Error::Internal("multiplication table is not unital".into()));
            }
        }
        for s in 0..n {
            for t in 0..n {
                let st = self.mul(&self.unit_vector(s), &self.unit_vector(t));
                for u in 0..n {
                    let left = self.mul(&st, &self.unit_vector(u));
                    let tu = self.mul(&self.unit_vector(t), &self.unit_vector(u));
                    let right = self.mul(&self.unit_vector(s), &tu);
                    if left != right {
                        return Err(Error::Internal(format!(
                            "multiplication table is not associative at ({s},{t},{u})"
                        )));
                    }
                }
            }
        }
        for rel in &self.relations {
            if self.relation_element(rel).iter().any(|x| !x.is_zero()) {
                return Err(Error::Internal("a relation does not vanish".into()));
            }
        }
        Ok(())
    }

    /// The element of the algebra represented by a relation (always zero).
    fn relation_element(&self, rel: &Relation) -> Vec<Scalar> {
        let mut acc = vec![self.field.zero(); self.dim()];
        for (c, w) in &rel.terms {
            let v = self.path_element(w);
            for (x, y) in acc.iter_mut().zip(&v) {
                *x += &(c * y);
            }
        }
        acc
    }

    /// Coordinates of a nontrivial path given by arrow indices.
    pub fn path_element(&self, arrows: &[usize]) -> Vec<Scalar> {
        let mut v = self.unit_vector(self.idempotents[self.quiver.arrows[arrows[0]].source]);
        for &a in arrows {
            match self.arrow_basis[a] {
                Some(b) => v = self.mul(&v, &self.unit_vector(b)),
                None => return vec![self.field.zero(); self.dim()],
            }
        }
        v
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn max_path_length(&self) -> usize {
        self.max_path_length
    }

    pub fn num_vertices(&self) -> usize {
        self.quiver.num_vertices()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn basis_name(&self, b: usize) -> String {
        path_name(&self.quiver, &self.basis[b])
    }

    /// Basis elements of `e_i Λ e_j` (paths from `i` to `j`), in basis order.
    pub fn paths_between(&self, i: usize, j: usize) -> &[usize] {
        &self.between[i][j]
    }

    pub fn idempotent(&self, v: usize) -> usize {
        self.idempotents[v]
    }

    /// Basis index of an arrow (arrows never vanish: relations have length ≥ 2).
    pub fn arrow_basis(&self, a: usize) -> usize {
        self.arrow_basis[a].expect("arrows are basis elements")
    }

    /// Sparse coordinates of the product of two basis elements.
    pub fn mul_basis(&self, s: usize, t: usize) -> &[(usize, Scalar)] {
        &self.mult[s][t]
    }

    pub fn unit_vector(&self, b: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[b] = self.field.one();
        v
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim()];
        for (s, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (t, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (u, c) in &self.mult[s][t] {
                    out[*u] += &(&ab * c);
                }
            }
        }
        out
    }

    /// Matrix of `x ↦ left * x` restricted to `e_a Λ e_c → e_b Λ e_c`,
    /// for `left ∈ e_b Λ e_a`.
    pub fn left_mul_matrix(&self, left: &[Scalar], a: usize, b: usize, c: usize) -> Matrix {
        let from = self.paths_between(a, c);
        let to = self.paths_between(b, c);
        self.restricted_product(to, from, |x| self.mul(left, &self.unit_vector(x)))
    }

    /// Matrix of `y ↦ y * right` restricted to `e_c Λ e_a → e_c Λ e_b`,
    /// for `right ∈ e_a Λ e_b`.
    pub fn right_mul_matrix(&self, right: &[Scalar], c: usize, a: usize, b: usize) -> Matrix {
        let from = self.paths_between(c, a);
        let to = self.paths_between(c, b);
        self.restricted_product(to, from, |y| self.mul(&self.unit_vector(y), right))
    }

    fn restricted_product(
        &self,
        to: &[usize],
        from: &[usize],
        f: impl Fn(usize) -> Vec<Scalar>,
    ) -> Matrix {
        let mut m = Matrix::zeros(self.field, to.len(), from.len());
        for (j, &x) in from.iter().enumerate() {
            let image = f(x);
            for (i, &y) in to.iter().enumerate() {
                m.set(i, j, image[y].clone());
            }
            debug_assert!(image
                .iter()
                .enumerate()
                .all(|(u, v)| v.is_zero() || to.contains(&u)));
        }
        m
    }

    /// All paths of length exactly `len`.
    pub fn paths_of_length(&self, len: usize) -> Vec<Path> {
        enumerate_paths(&self.quiver, len)
            .into_iter()
            .filter(|p| p.len() == len)
            .collect()
    }
}

fn enumerate_paths(quiver: &Quiver, max_len: usize) -> Vec<Path> {
    let mut all: Vec<Path> = (0..quiver.num_vertices())
        .map(|v| Path {
            source: v,
            target: v,
            arrows: vec![],
        })
        .collect();
    let mut frontier: Vec<Path> = all.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for (a, arrow) in quiver.arrows.iter().enumerate() {
                if arrow.source == p.target {
                    let mut arrows = p.arrows.clone();
                    arrows.push(a);
                    next.push(Path {
                        source: p.source,
                        target: arrow.target,
                        arrows,
                    });
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

fn validate_relation(quiver: &Quiver, field: Field, r: usize, rel: &Relation) -> Result<()> {
    if rel.terms.is_empty() {
        return Err(Error::InvalidRelation(format!("relation {r} is empty")));
    }
    let mut endpoints = None;
    for (c, w) in &rel.terms {
        if c.field() != field {
            return Err(Error::FieldMismatch(field.tag(), c.field().tag()));
        }
        if w.len() < 2 {
            return Err(Error::InvalidRelation(format!(
                "relation {r} contains a path of length {} (need ≥ 2)",
                w.len()
            )));
        }
        if let Some(&bad) = w.iter().find(|&&a| a >= quiver.arrows.len()) {
            return Err(Error::UnknownArrow(format!("#{bad}")));
        }
        for pair in w.windows(2) {
            if quiver.arrows[pair[0]].target != quiver.arrows[pair[1]].source {
                return Err(Error::InvalidRelation(format!(
                    "relation {r}: arrows {} and {} do not compose",
                    quiver.arrows[pair[0]].name, quiver.arrows[pair[1]].name
                )));
            }
        }
        let ends = (
            quiver.arrows[w[0]].source,
            quiver.arrows[*w.last().unwrap()].target,
        );
        match endpoints {
            None => endpoints = Some(ends),
            Some(e) if e != ends => {
                return Err(Error::InvalidRelation(format!(
                    "relation {r} combines non-parallel paths"
                )))
            }
            _ => {}
        }
    }
    Ok(())
}

fn relation_endpoints(quiver: &Quiver, rel: &Relation) -> (usize, usize) {
    let w = &rel.terms[0].1;
    (
        quiver.arrows[w[0]].source,
        quiver.arrows[*w.last().unwrap()].target,
    )
}

fn path_name(quiver: &Quiver, p: &Path) -> String {
    if p.is_trivial() {
        format!("e{}", quiver.vertices[p.source])
    } else {
        p.arrows
            .iter()
            .map(|&a| quiver.arrows[a].name.as_str())
            .collect::<Vec<_>>()
            .join("*")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiver(vs: &[&str], arrows: &[(&str, &str, &str)]) -> Quiver {
        Quiver::new(
            vs.iter().map(|s| s.to_string()).collect(),
            arrows
                .iter()
                .map(|(n, f, t)| (n.to_string(), f.to_string(), t.to_string()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_vertex() {
        let alg = BoundAlgebra::new(quiver(&["1"], &[]), vec![], Field::Rational, 1).unwrap();
        assert_eq!(alg.dim(), 1);
        assert_eq!(alg.basis_name(0), "e1");
    }

    #[test]
    fn dual_numbers() {
        let q = quiver(&["1"], &[("x", "1", "1")]);
        let rel = Relation {
            terms: vec![(Field::Rational.one(), vec![0, 0])],
        };
        let alg = BoundAlgebra::new(q, vec![rel], Field::Rational, 2).unwrap();
        assert_eq!(alg.dim(), 2);
        let names: Vec<String> = (0..2).map(|b| alg.basis_name(b)).collect();
        assert_eq!(names, ["e1", "x"]);
        assert!(alg.mul_basis(1, 1).is_empty());
    }

    #[test]
    fn a2_path_count() {
        let alg = BoundAlgebra::new(
            quiver(&["1", "2"], &[("a", "1", "2")]),
            vec![],
            Field::Rational,
            2,
        )
        .unwrap();
        assert_eq!(alg.dim(), 3);
        assert_eq!(alg.paths_between(0, 1), &[2]);
    }

    #[test]
    fn commutativity_relation_keeps_one_path() {
        // Square 1→2→4, 1→3→4 with ab = cd.
        let q = quiver(
            &["1", "2", "3", "4"],
            &[("a", "1", "2"), ("b", "2", "4"), ("c", "1", "3"), ("d", "3", "4")],
        );
        let f = Field::Rational;
        let rel = Relation {
            terms: vec![(f.one(), vec![0, 1]), (f.from_i64(-1), vec![2, 3])],
        };
        let alg = BoundAlgebra::new(q, vec![rel], f, 3).unwrap();
        assert_eq!(alg.dim(), 4 + 4 + 1);
        let ab = alg.path_element(&[0, 1]);
        let cd = alg.path_element(&[2, 3]);
        assert_eq!(ab, cd);
    }

    #[test]
    fn rejects_non_admissible() {
        let q = quiver(&["1"], &[("x", "1", "1")]);
        let err = BoundAlgebra::new(q, vec![], Field::Rational, 3).unwrap_err();
        assert!(matches!(err, Error::NonAdmissible { length: 3, .. }));
    }

    #[test]
    fn rejects_non_parallel_relation() {
        let q = quiver(&["1", "2"], &[("x", "1", "1"), ("a", "1", "2")]);
        let f = Field::Rational;
        let rel = Relation {
            terms: vec![(f.one(), vec![0, 0]), (f.one(), vec![0, 1])],
        };
        assert!(matches!(
            BoundAlgebra::new(q, vec![rel], f, 2),
            Err(Error::InvalidRelation(_))
        ));
    }
}
