fn main() {
    germzeta::cli::main_exit()
}
