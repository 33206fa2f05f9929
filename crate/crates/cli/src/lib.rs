// Copyright 2026 the exactgeo developers.
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// http://www.apache.org/licenses/LICENSE-2.0> or the MIT license
// <LICENSE-MIT or http://opensource.org/licenses/MIT>, at your
// option. This file may not be copied, modified, or distributed
// except according to those terms.

//! Library side of the `exactgeo` binary: input generators, benchmark
//! records, and the commands themselves, callable in-process.

pub mod bench;
pub mod commands;
pub mod gen;
