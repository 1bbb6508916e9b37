//! JSON forms of ring elements: residues and integers as numbers (integers
//! beyond `i64` as decimal strings), polynomial backends as ascending
//! coefficient arrays, split-ring elements as arrays of base values.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::Value;

use super::{Kind, Ring, RingElement, RingError};

fn int_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(n.to_string()),
    }
}

fn int_from_json(v: &Value) -> Result<BigInt, RingError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| RingError::InvalidElement(format!("not an integer: {n}"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| RingError::InvalidElement(format!("not an integer: {s}"))),
        other => Err(RingError::InvalidElement(format!("expected an integer, got {other}"))),
    }
}

fn array(v: &Value) -> Result<&Vec<Value>, RingError> {
    v.as_array()
        .ok_or_else(|| RingError::InvalidElement(format!("expected an array, got {v}")))
}

fn residue(v: &Value, p: u64) -> Result<u64, RingError> {
    let n = v
        .as_u64()
        .ok_or_else(|| RingError::InvalidElement(format!("expected a residue, got {v}")))?;
    if n >= p {
        return Err(RingError::InvalidElement(format!("{n} is not reduced modulo {p}")));
    }
    Ok(n)
}

impl Ring {
    pub fn to_json(&self, e: &RingElement) -> Value {
        match e {
            RingElement::Mod(v) => Value::from(*v),
            RingElement::Poly(v) => Value::from(v.clone()),
            RingElement::Int(n) => int_to_json(n),
            RingElement::Cyclo(v) => Value::Array(v.iter().map(int_to_json).collect()),
            RingElement::Split(v) => {
                let (base, _) = self.split_parts().expect("split element in split ring");
                Value::Array(v.iter().map(|x| base.to_json(x)).collect())
            }
        }
    }

    /// Parses the JSON form. Coefficient arrays shorter than the canonical
    /// length are zero-padded; anything unreduced is rejected.
    pub fn from_json(&self, v: &Value) -> Result<RingElement, RingError> {
        let e = match &*self.0 {
            Kind::PrimeField { p } => RingElement::Mod(residue(v, *p)?),
            Kind::FiniteField { p, modulus } => {
                let n = modulus.len() - 1;
                let items = array(v)?;
                if items.len() > n {
                    return Err(RingError::InvalidElement(format!(
                        "{} coefficients exceed degree {n}",
                        items.len()
                    )));
                }
                let mut c = items
                    .iter()
                    .map(|x| residue(x, *p))
                    .collect::<Result<Vec<_>, _>>()?;
                c.resize(n, 0);
                RingElement::Poly(c)
            }
            Kind::Integers => RingElement::Int(int_from_json(v)?),
            Kind::Cyclotomic { phi, .. } => {
                let n = phi.len() - 1;
                let mut c = match v {
                    Value::Array(items) => items
                        .iter()
                        .map(int_from_json)
                        .collect::<Result<Vec<_>, _>>()?,
                    scalar => vec![int_from_json(scalar)?],
                };
                if c.len() > n {
                    return Err(RingError::InvalidElement(format!(
                        "{} coefficients exceed degree {n}",
                        c.len()
                    )));
                }
                c.resize(n, BigInt::zero());
                RingElement::Cyclo(c)
            }
            Kind::Split { base, group } => {
                let items = array(v)?;
                if items.len() != group.order() {
                    return Err(RingError::InvalidElement(format!(
                        "expected {} values, got {}",
                        group.order(),
                        items.len()
                    )));
                }
                RingElement::Split(
                    items
                        .iter()
                        .map(|x| base.from_json(x))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
        };
        debug_assert!(self.contains(&e));
        Ok(e)
    }
}
