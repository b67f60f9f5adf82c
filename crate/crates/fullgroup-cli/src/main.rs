fn main() {
    println!("fullgroup {}", fullgroup_cli::placeholder::version());
}
