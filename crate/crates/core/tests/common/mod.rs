#![allow(dead_code)]

pub mod hypothesis_cases;
