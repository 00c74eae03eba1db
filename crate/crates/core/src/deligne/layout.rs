//! Block layouts of triple cochains `(c, k, ω)` inside one ambient vector.

use num_traits::{One, Zero};

use crate::abelian::linalg::Q;
use crate::abelian::{RatMatrix, Subgroup};
use crate::simplicial::SimplicialComplex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    /// Integral cochain.
    C,
    /// Rational comparison cochain.
    K,
    /// Rational curvature cochain.
    Omega,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub slot: Slot,
    /// Cochain degree of the block.
    pub degree: usize,
    pub offset: usize,
    pub len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    blocks: Vec<Block>,
    total: usize,
}

impl Layout {
    pub fn new(k: &SimplicialComplex, slots: &[(Slot, usize)]) -> Self {
        let mut blocks = Vec::new();
        let mut off = 0;
        for &(slot, degree) in slots {
            let len = k.count(degree);
            if degree > k.dim() || len == 0 {
                continue;
            }
            blocks.push(Block { slot, degree, offset: off, len });
            off += len;
        }
        Layout { blocks, total: off }
    }

    pub fn empty() -> Self {
        Layout { blocks: Vec::new(), total: 0 }
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, slot: Slot, degree: usize) -> Option<&Block> {
        self.blocks.iter().find(|b| b.slot == slot && b.degree == degree)
    }

    pub fn integral_mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.total];
        for b in &self.blocks {
            if b.slot == Slot::C {
                m[b.offset..b.offset + b.len].iter_mut().for_each(|x| *x = true);
            }
        }
        m
    }

    /// `Z^{c-blocks} ⊕ Q^{k, ω-blocks}`.
    pub fn standard(&self) -> Subgroup {
        Subgroup::standard(&self.integral_mask())
    }

    /// Sub-layout of the blocks whose slot is in `slots`, re-packed.
    pub fn only(&self, slots: &[Slot]) -> Layout {
        let mut blocks = Vec::new();
        let mut off = 0;
        for b in &self.blocks {
            if slots.contains(&b.slot) {
                blocks.push(Block { slot: b.slot, degree: b.degree, offset: off, len: b.len });
                off += b.len;
            }
        }
        Layout { blocks, total: off }
    }

    /// Same blocks with every slot relabelled.
    pub fn relabel(&self, slot: Slot) -> Layout {
        let blocks = self.blocks.iter().map(|b| Block { slot, ..b.clone() }).collect();
        Layout { blocks, total: self.total }
    }

    /// Matrix copying each block of `src` into the block of `self` with the
    /// same slot and degree (after `slot_map`), dropping blocks with no match.
    pub fn transfer_from(&self, src: &Layout, slot_map: impl Fn(Slot) -> Slot) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.total, src.total);
        for b in &src.blocks {
            if let Some(t) = self.block(slot_map(b.slot), b.degree) {
                debug_assert_eq!(t.len, b.len);
                for i in 0..b.len {
                    m.set(t.offset + i, b.offset + i, Q::one());
                }
            }
        }
        m
    }

    /// Restriction from a layout over `k` to the same layout over the subcomplex `sub`.
    pub fn restriction_to(&self, k: &SimplicialComplex, sub: &SimplicialComplex, sub_layout: &Layout) -> RatMatrix {
        let mut m = RatMatrix::zeros(sub_layout.total, self.total);
        for b in &sub_layout.blocks {
            let src = self.block(b.slot, b.degree).expect("sub layout has the same blocks");
            for (i, s) in sub.simplices(b.degree).iter().enumerate() {
                let j = k.index_of(s).expect("subcomplex simplex");
                m.set(b.offset + i, src.offset + j, Q::one());
            }
        }
        m
    }

    /// Extracts a block of a vector in this layout; zero if the block is absent.
    pub fn read(&self, v: &[Q], slot: Slot, degree: usize, len: usize) -> Vec<Q> {
        match self.block(slot, degree) {
            Some(b) => v[b.offset..b.offset + b.len].to_vec(),
            None => vec![Q::zero(); len],
        }
    }

    pub fn write(&self, v: &mut [Q], slot: Slot, degree: usize, data: &[Q]) {
        if let Some(b) = self.block(slot, degree) {
            v[b.offset..b.offset + b.len].clone_from_slice(data);
        }
    }
}
