//! Arithmetic over Q: power residue indices, Hilbert symbols, Z/p Dirichlet
//! characters and their local behaviour, governing-field certificates and
//! searches for auxiliary primes.
//!
//! Only odd p is supported outside the symbol operations. For odd p over Q
//! the group of p-virtual units `V^∅` is trivial modulo p-th powers, so no
//! extra primes are needed to kill the Shafarevich group and the local
//! conditions below are the whole story.

mod character;
mod governing;
mod search;
mod symbols;

pub use character::{
    global_cup_vanishes, local_restriction, CharacterQ, CupLedger, LocalDatum, PlacePairing,
};
pub use governing::{
    dirichlet_oracle, frobenius_matrix, gras_munnier, GoverningBasis, GrasMunnierCertificate,
};
pub use search::{
    character_with_local_data, character_with_local_data_ramified, find_aux_prime,
    pr_lift_required, AuxPrime, AuxSearch, LocalCharacter,
};
pub use symbols::{
    cup_vanishes_p2, hilbert_symbol, relevant_places, res_index, Place, SymbolLedger,
};
