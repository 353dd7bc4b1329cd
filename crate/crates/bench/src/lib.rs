pub use nestkit::*;
