use std::fmt::Debug;

use num_traits::{PrimInt, Unsigned};

/// Unsigned counter cell extended with a `+∞` sentinel.
///
/// The largest representable value is reserved as `INFINITY`; finite
/// increments saturate one below it, so a finite counter never turns into a
/// marked one.
pub trait Counter: PrimInt + Unsigned + Debug + Default + Send + Sync + 'static {
    const INFINITY: Self;
    /// Byte width of the little-endian encoding.
    const BYTES: usize;

    #[inline]
    fn is_infinite(self) -> bool {
        self == Self::INFINITY
    }

    /// `self + 1`, saturating below the sentinel. `+∞` stays `+∞`.
    #[inline]
    fn bump(self) -> Self {
        if self >= Self::INFINITY - Self::one() {
            self
        } else {
            self + Self::one()
        }
    }

    fn to_u64(self) -> u64;

    /// Finite values saturate below the sentinel.
    fn from_u64(v: u64) -> Self;

    fn write_le(self, out: &mut Vec<u8>);
    fn read_le(bytes: &[u8]) -> Self;
}

macro_rules! impl_counter {
    ($($t:ty),*) => {$(
        impl Counter for $t {
            const INFINITY: Self = <$t>::MAX;
            const BYTES: usize = std::mem::size_of::<$t>();

            #[inline]
            fn to_u64(self) -> u64 {
                self as u64
            }

            #[inline]
            fn from_u64(v: u64) -> Self {
                if v >= (<$t>::MAX - 1) as u64 {
                    <$t>::MAX - 1
                } else {
                    v as $t
                }
            }

            fn write_le(self, out: &mut Vec<u8>) {
                out.extend_from_slice(&self.to_le_bytes());
            }

            fn read_le(bytes: &[u8]) -> Self {
                let mut buf = [0u8; std::mem::size_of::<$t>()];
                buf.copy_from_slice(bytes);
                <$t>::from_le_bytes(buf)
            }
        }
    )*};
}

impl_counter!(u16, u32, u64);

/// Initial value of a vertex counter: a natural number or a `+∞` mark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Extended {
    Finite(u64),
    Infinite,
}

impl Extended {
    pub fn to_counter<C: Counter>(self) -> C {
        match self {
            Extended::Finite(v) => C::from_u64(v),
            Extended::Infinite => C::INFINITY,
        }
    }

    pub fn from_counter<C: Counter>(c: C) -> Self {
        if c.is_infinite() {
            Extended::Infinite
        } else {
            Extended::Finite(c.to_u64())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_saturates_below_infinity() {
        assert_eq!(5u16.bump(), 6);
        assert_eq!((u16::MAX - 1).bump(), u16::MAX - 1);
        assert_eq!(u16::INFINITY.bump(), u16::INFINITY);
        assert!(!(u16::MAX - 1).is_infinite());
    }

    #[test]
    fn extended_orders_infinity_last() {
        assert!(Extended::Finite(u64::MAX - 1) < Extended::Infinite);
        assert_eq!(Extended::Infinite.to_counter::<u32>(), u32::MAX);
        assert_eq!(Extended::Finite(u64::MAX).to_counter::<u32>(), u32::MAX - 1);
        assert_eq!(Extended::from_counter(7u64), Extended::Finite(7));
    }

    #[test]
    fn le_roundtrip() {
        let mut buf = Vec::new();
        0xdead_beefu32.write_le(&mut buf);
        assert_eq!(buf, [0xef, 0xbe, 0xad, 0xde]);
        assert_eq!(u32::read_le(&buf), 0xdead_beef);
    }
}
