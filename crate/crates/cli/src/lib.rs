//! Benchmark harness for skeletonized interpolation: experiment drivers and
//! CSV record emission behind the `skelfac` binary.

pub mod experiments;
pub mod records;
