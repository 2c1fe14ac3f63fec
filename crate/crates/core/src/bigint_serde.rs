//! Big integers in JSON: a number when it fits in `i64`, a decimal string otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

pub(crate) struct Int<'a>(pub &'a BigInt);

impl Serialize for Int<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub(crate) struct Ints<'a>(pub &'a [BigInt]);

impl Serialize for Ints<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(Int))
    }
}

pub(crate) fn seq<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    Ints(v).serialize(s)
}

pub(crate) fn nested<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|row| Ints(row)))
}

pub(crate) fn opt<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    v.as_ref().map(Int).serialize(s)
}

pub(crate) fn by_degree<S: Serializer>(v: &[(usize, Vec<BigInt>)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|(k, t)| (k, Ints(t))))
}

pub(crate) fn with_stream<S: Serializer>(v: &Option<(BigInt, u64)>, s: S) -> Result<S::Ok, S::Error> {
    v.as_ref().map(|(b, stream)| (Int(b), stream)).serialize(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values_are_numbers() {
        let v = vec![BigInt::from(2), BigInt::from(u64::MAX) * 4];
        let json = serde_json::to_string(&Ints(&v)).unwrap();
        assert_eq!(json, "[2,\"73786976294838206460\"]");
    }
}
