//! 1D TDSE laboratory (stub).
