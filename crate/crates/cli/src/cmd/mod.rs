pub mod extract;
pub mod misc;
pub mod obstruct;
pub mod pipeline;
pub mod tww;
