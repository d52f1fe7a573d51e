//! Degree-`e` extensions GF(q^e) of a base field GF(q), with an explicit embedding.
//!
//! Used to evaluate functions at a geometric point lying over a closed place
//! of degree `e`.

use crate::error::{Error, Result};
use crate::field::{make_field, Field, MAX_FIELD_ORDER};
use crate::poly::Poly;
use crate::rational::RationalFunction;

#[derive(Clone, Debug)]
pub struct Extension {
    base: Field,
    ext: Field,
    degree: u32,
    embedding: Vec<u32>,
}

impl Extension {
    pub fn new(base: &Field, degree: u32) -> Result<Extension> {
        if degree == 0 {
            return Err(Error::precondition("extension degree must be positive"));
        }
        let total = base.degree() * degree;
        if (base.characteristic() as u64)
            .checked_pow(total)
            .is_none_or(|q| q > MAX_FIELD_ORDER)
        {
            return Err(Error::guard(
                "extension field order",
                format!("{}^{}", base.order(), degree),
                MAX_FIELD_ORDER,
            ));
        }
        let ext = make_field(base.characteristic(), total)?;
        // The prime subfield embeds as the integers 0..p in both encodings, so
        // the base modulus can be evaluated in `ext` directly.
        let modulus = base.modulus();
        let eval = |b: u32| modulus.iter().rev().fold(0, |acc, &c| ext.add(ext.mul(acc, b), c));
        let beta = ext
            .elements()
            .find(|&b| eval(b) == 0)
            .expect("base modulus splits in the extension");
        let embedding = base
            .elements()
            .map(|a| {
                base.coefficients(a)
                    .iter()
                    .rev()
                    .fold(0, |acc, &c| ext.add(ext.mul(acc, beta), c))
            })
            .collect();
        Ok(Extension {
            base: base.clone(),
            ext,
            degree,
            embedding,
        })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn field(&self) -> &Field {
        &self.ext
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn embed(&self, a: u32) -> u32 {
        self.embedding[a as usize]
    }

    pub fn embed_poly(&self, p: &Poly) -> Poly {
        Poly::new(&self.ext, p.coeffs().iter().map(|&c| self.embed(c)).collect())
    }

    pub fn embed_rational(&self, f: &RationalFunction) -> RationalFunction {
        RationalFunction::reduce(self.embed_poly(f.num()), self.embed_poly(f.den()))
            .expect("embedding preserves nonzero denominators")
    }

    /// Roots in the extension of a base polynomial, in canonical order.
    pub fn roots(&self, p: &Poly) -> Vec<u32> {
        let lifted = self.embed_poly(p);
        self.ext.elements().filter(|&a| lifted.eval(a) == 0).collect()
    }
}
