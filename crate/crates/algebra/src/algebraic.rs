//! Concrete algebraic numbers: a squarefree defining polynomial plus an
//! isolating box that is refined on demand.

use crate::complex::CInterval;
use crate::error::{AlgebraError, Result};
use crate::rational::{pow2, Q};
use crate::roots::{isolate_complex_roots, refine, RootBox, PRECISION_CAP};
use crate::unipoly::UniPoly;
use std::sync::Mutex;

#[derive(Debug)]
pub struct AlgebraicNumber {
    poly: UniPoly<Q>,
    root: Mutex<RootBox>,
}

impl Clone for AlgebraicNumber {
    fn clone(&self) -> Self {
        AlgebraicNumber {
            poly: self.poly.clone(),
            root: Mutex::new(self.root.lock().unwrap().clone()),
        }
    }
}

impl AlgebraicNumber {
    /// `poly` must be squarefree and `root` must isolate one of its roots.
    pub fn new(poly: UniPoly<Q>, root: RootBox) -> Self {
        AlgebraicNumber {
            poly: poly.monic(),
            root: Mutex::new(root),
        }
    }

    pub fn rational(x: &Q) -> Self {
        let poly = UniPoly::new(vec![-x.clone(), Q::from_integer(1.into())]);
        AlgebraicNumber::new(
            poly,
            RootBox::Real(crate::sturm::RealRoot {
                lo: x.clone(),
                hi: x.clone(),
            }),
        )
    }

    /// All roots of `p` (made squarefree).
    pub fn roots_of(p: &UniPoly<Q>) -> Result<Vec<AlgebraicNumber>> {
        let sp = p.squarefree_part();
        Ok(isolate_complex_roots(&sp)?
            .into_iter()
            .map(|b| AlgebraicNumber::new(sp.clone(), b))
            .collect())
    }

    pub fn poly(&self) -> &UniPoly<Q> {
        &self.poly
    }

    pub fn is_real(&self) -> bool {
        self.root.lock().unwrap().is_real()
    }

    pub fn root_box(&self) -> RootBox {
        self.root.lock().unwrap().clone()
    }

    /// Enclosure of width at most `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> Result<CInterval> {
        let w = pow2(-(bits as i64));
        let mut g = self.root.lock().unwrap();
        if g.width() > w {
            *g = refine(&self.poly, &g, &w)?;
        }
        Ok(g.enclosure())
    }
}

/// Index of the unique root in `roots` consistent with the enclosures
/// produced by `value` at growing precision.
pub fn locate<F>(roots: &[AlgebraicNumber], mut value: F) -> Result<usize>
where
    F: FnMut(u32) -> Result<CInterval>,
{
    let mut bits = 32;
    while bits <= PRECISION_CAP {
        let v = value(bits)?;
        let mut hits = Vec::new();
        for (i, r) in roots.iter().enumerate() {
            if r.enclosure(bits)?.overlaps(&v) {
                hits.push(i);
            }
        }
        match hits.len() {
            0 => {
                return Err(AlgebraError::RootIsolation(
                    "value matches no candidate root".into(),
                ))
            }
            1 => return Ok(hits[0]),
            _ => bits *= 2,
        }
    }
    Err(AlgebraError::PrecisionExhausted(PRECISION_CAP))
}
