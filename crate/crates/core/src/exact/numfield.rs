//! Number fields presented by a monic integer polynomial, carrying a
//! designated conjugation involution given as the image of the generator.
//!
//! The involution must be a ring automorphism of order at most 2; this is
//! verified on construction by checking that the defining polynomial
//! vanishes at the image and that applying the map twice fixes the
//! generator.

use super::linalg::solve;
use super::{FieldElem, Rat};
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use std::sync::Arc;

/// A number field Q[x]/(poly) with a designated involution.
#[derive(Debug, PartialEq)]
pub struct NumField {
    /// Monic defining polynomial with integer coefficients, ascending,
    /// length degree + 1.
    poly: Vec<Rat>,
    /// Image of the generator under conjugation, power-basis coords,
    /// length degree.
    conj_gen: Vec<Rat>,
}

impl NumField {
    /// The rational field presented as Q[x]/(x) with identity involution.
    pub fn rational() -> Arc<NumField> {
        Arc::new(NumField {
            poly: vec![Rat::zero(), Rat::one()],
            conj_gen: vec![Rat::zero()],
        })
    }

    /// Build and validate a field description.
    pub fn new(poly: Vec<Rat>, conj_gen: Vec<Rat>) -> Result<Arc<NumField>> {
        let deg = poly.len().checked_sub(1).filter(|&d| d >= 1).ok_or_else(|| {
            Error::InvalidInput {
                context: "defining polynomial must have degree >= 1".into(),
            }
        })?;
        if !poly[deg].is_one() {
            return Err(Error::InvalidInput {
                context: "defining polynomial must be monic".into(),
            });
        }
        if poly.iter().any(|c| !c.denom().is_one()) {
            return Err(Error::InvalidInput {
                context: "defining polynomial must have integer coefficients".into(),
            });
        }
        let mut conj_gen = conj_gen;
        conj_gen.resize(deg, Rat::zero());
        let field = NumField { poly, conj_gen };
        // conj must be a ring map: poly(conj(gen)) = 0.
        let image = NumFieldElem {
            field: Arc::new(NumField {
                poly: field.poly.clone(),
                conj_gen: field.conj_gen.clone(),
            }),
            coords: field.conj_gen.clone(),
        };
        let mut acc = image.zero_like();
        for c in field.poly.iter().rev() {
            acc = acc.mul(&image);
            acc.coords[0] += c;
        }
        if !FieldElem::is_zero(&acc) {
            return Err(Error::InvalidInput {
                context: "conjugation image is not a root of the defining polynomial".into(),
            });
        }
        // Involution: applying twice returns the generator.
        let twice = image.substitute(&image.coords);
        let gen_coords: Vec<Rat> = (0..deg)
            .map(|i| if i == 1 { Rat::one() } else { Rat::zero() })
            .collect();
        let gen_coords = if deg == 1 {
            // Degree one: generator is the root itself, -poly[0].
            vec![-field.poly[0].clone()]
        } else {
            gen_coords
        };
        if twice.coords != gen_coords {
            return Err(Error::InvalidInput {
                context: "conjugation does not square to the identity".into(),
            });
        }
        Ok(Arc::new(field))
    }

    /// Field degree over Q.
    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    /// Defining polynomial, ascending coefficients.
    pub fn poly(&self) -> &[Rat] {
        &self.poly
    }

    /// Conjugation image of the generator, power-basis coords.
    pub fn conj_gen(&self) -> &[Rat] {
        &self.conj_gen
    }

    /// True if the involution is the identity map.
    pub fn conj_is_identity(&self) -> bool {
        if self.degree() == 1 {
            return true;
        }
        self.conj_gen
            .iter()
            .enumerate()
            .all(|(i, c)| if i == 1 { c.is_one() } else { Zero::is_zero(c) })
    }
}

/// An element of a [`NumField`] in the power basis.
#[derive(Clone, Debug)]
pub struct NumFieldElem {
    field: Arc<NumField>,
    coords: Vec<Rat>,
}

impl NumFieldElem {
    /// Element from power-basis coordinates (padded or reduced as needed).
    pub fn new(field: Arc<NumField>, mut coords: Vec<Rat>) -> Self {
        let deg = field.degree();
        if coords.len() > deg {
            coords = reduce_mod_poly(&coords, &field.poly);
        }
        coords.resize(deg, Rat::zero());
        NumFieldElem { field, coords }
    }

    /// The field generator.
    pub fn generator(field: Arc<NumField>) -> Self {
        let deg = field.degree();
        let coords = if deg == 1 {
            vec![-field.poly[0].clone()]
        } else {
            let mut c = vec![Rat::zero(); deg];
            c[1] = Rat::one();
            c
        };
        NumFieldElem { field, coords }
    }

    /// A rational constant in the given field.
    pub fn from_rat(field: Arc<NumField>, r: Rat) -> Self {
        let deg = field.degree();
        let mut coords = vec![Rat::zero(); deg];
        coords[0] = r;
        NumFieldElem { field, coords }
    }

    /// Field handle.
    pub fn field(&self) -> &Arc<NumField> {
        &self.field
    }

    /// Power-basis coordinates.
    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    /// Evaluate this element's polynomial expression at the given
    /// generator image (power-basis coords of any field element).
    fn substitute(&self, at: &[Rat]) -> Self {
        let image = NumFieldElem::new(self.field.clone(), at.to_vec());
        let mut acc = self.zero_like();
        for c in self.coords.iter().rev() {
            acc = acc.mul(&image);
            acc.coords[0] += c;
        }
        acc
    }

    /// The designated conjugation.
    pub fn conj(&self) -> Self {
        self.substitute(&self.field.conj_gen.clone())
    }

    fn check_same_field(&self, other: &Self) {
        assert!(
            self.field == other.field || Arc::ptr_eq(&self.field, &other.field),
            "number field mismatch"
        );
    }
}

/// Reduce arbitrary-length coordinates modulo the monic defining polynomial.
fn reduce_mod_poly(coords: &[Rat], poly: &[Rat]) -> Vec<Rat> {
    let deg = poly.len() - 1;
    let mut rem = coords.to_vec();
    if rem.len() < deg {
        rem.resize(deg, Rat::zero());
    }
    for k in (deg..rem.len()).rev() {
        let c = rem[k].clone();
        if Zero::is_zero(&c) {
            continue;
        }
        rem[k] = Rat::zero();
        for j in 0..deg {
            let v = &rem[k - deg + j] - &c * &poly[j];
            rem[k - deg + j] = v;
        }
    }
    rem.truncate(deg);
    rem
}

impl PartialEq for NumFieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coords == other.coords
    }
}

impl FieldElem for NumFieldElem {
    fn zero_like(&self) -> Self {
        NumFieldElem {
            field: self.field.clone(),
            coords: vec![Rat::zero(); self.field.degree()],
        }
    }
    fn one_like(&self) -> Self {
        NumFieldElem::from_rat(self.field.clone(), Rat::one())
    }
    fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| Zero::is_zero(c))
    }
    fn add(&self, other: &Self) -> Self {
        self.check_same_field(other);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        NumFieldElem {
            field: self.field.clone(),
            coords,
        }
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        self.check_same_field(other);
        let mut raw = vec![Rat::zero(); self.coords.len() + other.coords.len() - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if Zero::is_zero(b) {
                    continue;
                }
                let v = &raw[i + j] + a * b;
                raw[i + j] = v;
            }
        }
        NumFieldElem {
            field: self.field.clone(),
            coords: reduce_mod_poly(&raw, &self.field.poly),
        }
    }
    fn neg(&self) -> Self {
        NumFieldElem {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if FieldElem::is_zero(self) {
            return None;
        }
        let deg = self.field.degree();
        let mut rows = vec![vec![Rat::zero(); deg]; deg];
        for i in 0..deg {
            let mut basis = self.zero_like();
            basis.coords[i] = Rat::one();
            let prod = self.mul(&basis);
            for (r, c) in prod.coords.iter().enumerate() {
                rows[r][i] = c.clone();
            }
        }
        let mut rhs = vec![Rat::zero(); deg];
        rhs[0] = Rat::one();
        let x = solve(&rows, &rhs)?;
        Some(NumFieldElem {
            field: self.field.clone(),
            coords: x,
        })
    }
    fn scale(&self, r: &Rat) -> Self {
        NumFieldElem {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }
    fn to_rational(&self) -> Option<Rat> {
        if self.coords[1..].iter().all(|c| Zero::is_zero(c)) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }
}
