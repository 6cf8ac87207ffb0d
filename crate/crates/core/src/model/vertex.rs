use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Side::Left => "L",
            Side::Right => "R",
        }
    }
}

/// A vertex of λK_{v,u}. Ordering puts every left vertex before every right one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub side: Side,
    pub index: u32,
}

impl Vertex {
    pub const fn left(index: u32) -> Self {
        Vertex {
            side: Side::Left,
            index,
        }
    }

    pub const fn right(index: u32) -> Self {
        Vertex {
            side: Side::Right,
            index,
        }
    }

    pub fn is_left(self) -> bool {
        self.side == Side::Left
    }

    /// Swaps the two parts; used when normalizing `v > u` instances.
    pub fn mirrored(self) -> Self {
        Vertex {
            side: self.side.other(),
            index: self.index,
        }
    }

    /// Image under the transposition (a b).
    pub fn swapped(self, a: Vertex, b: Vertex) -> Self {
        if self == a {
            b
        } else if self == b {
            a
        } else {
            self
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.side.tag(), self.index)
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(2)?;
        t.serialize_element(self.side.tag())?;
        t.serialize_element(&self.index)?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let (tag, index): (String, u32) = Deserialize::deserialize(deserializer)?;
        match tag.as_str() {
            "L" => Ok(Vertex::left(index)),
            "R" => Ok(Vertex::right(index)),
            other => Err(de::Error::custom(format!("unknown part {other:?}"))),
        }
    }
}

/// Splits a cross-part pair into (left index, right index).
pub fn pair_of(a: Vertex, b: Vertex) -> Option<(u32, u32)> {
    match (a.side, b.side) {
        (Side::Left, Side::Right) => Some((a.index, b.index)),
        (Side::Right, Side::Left) => Some((b.index, a.index)),
        _ => None,
    }
}
