//! Schur and Bogomolov multipliers of finite nilpotent Lie rings, CP covers,
//! polycyclic p-group collection, and the Lazard correspondence.

pub mod exactlin;
pub mod assoc;
pub mod freelie;
pub mod bogomolov;
pub mod liering;
pub mod pcgroup;
pub mod bch;
pub mod lazard;
pub mod cli;
