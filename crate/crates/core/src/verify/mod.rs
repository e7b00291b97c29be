pub mod crc;
pub mod prop1;
pub mod properties;
pub mod report;
pub mod suite;
