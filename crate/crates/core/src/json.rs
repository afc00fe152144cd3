//! Serde helpers. Big integers travel as decimal strings so that consumers
//! never lose precision.

pub(crate) mod big_vec {
    use std::fmt;

    use num_bigint::BigInt;
    use serde::de::{self, SeqAccess, Visitor};
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(v.len()))?;
        for a in v {
            seq.serialize_element(&a.to_string())?;
        }
        seq.end()
    }

    /// Accepts decimal strings and, for convenience, plain JSON integers.
    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<BigInt>, D::Error> {
        deserializer.deserialize_seq(BigVecVisitor)
    }

    struct BigVecVisitor;

    impl<'de> Visitor<'de> for BigVecVisitor {
        type Value = Vec<BigInt>;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("an array of decimal integer strings")
        }

        fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
            let mut out = Vec::new();
            while let Some(BigElem(b)) = seq.next_element()? {
                out.push(b);
            }
            Ok(out)
        }
    }

    struct BigElem(BigInt);

    impl<'de> Deserialize<'de> for BigElem {
        fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
            deserializer.deserialize_any(BigElemVisitor)
        }
    }

    struct BigElemVisitor;

    impl<'de> Visitor<'de> for BigElemVisitor {
        type Value = BigElem;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a decimal integer string or an integer")
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<BigElem, E> {
            v.trim()
                .parse::<BigInt>()
                .map(BigElem)
                .map_err(|_| E::custom(format!("invalid integer {v:?}")))
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigElem, E> {
            Ok(BigElem(v.into()))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigElem, E> {
            Ok(BigElem(v.into()))
        }
    }
}
