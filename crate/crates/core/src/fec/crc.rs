/// Bitwise CRC over MSB-first bit strings, zero initial register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crc {
    /// Generator without its leading `x^len` term.
    poly: u64,
    len: u32,
}

impl Crc {
    /// `poly` includes the leading term, e.g. `0x1864CFB` for CRC-24A.
    pub fn new(poly: u64) -> Self {
        let len = 63 - poly.leading_zeros();
        assert!((1..=32).contains(&len), "generator degree must be in 1..=32");
        Self {
            poly: poly & ((1u64 << len) - 1),
            len,
        }
    }

    pub fn crc24a() -> Self {
        Self::new(0x1864CFB)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Remainder of `bits(x) · x^len` modulo the generator.
    pub fn remainder(&self, bits: &[u8]) -> Vec<u8> {
        let mask = (1u64 << self.len) - 1;
        let mut reg = 0u64;
        for &b in bits {
            let top = ((reg >> (self.len - 1)) & 1) as u8 ^ (b & 1);
            reg = (reg << 1) & mask;
            if top == 1 {
                reg ^= self.poly;
            }
        }
        (0..self.len).rev().map(|i| ((reg >> i) & 1) as u8).collect()
    }
}

pub fn crc_attach(info: &[u8], crc: &Crc) -> Vec<u8> {
    let mut out = Vec::with_capacity(info.len() + crc.len());
    out.extend_from_slice(info);
    out.extend(crc.remainder(info));
    out
}

pub fn crc_check(block: &[u8], crc: &Crc) -> bool {
    block.len() >= crc.len() && crc.remainder(block).iter().all(|&b| b == 0)
}
