#include <iostream>

#include <willcop/willcop.hpp>

// Runs the full verification suite and prints one pass/fail line per
// criterion. Exit code 0 iff every criterion passes.
int main() {
    willcop::VerifyOptions opt;
#ifdef WILLCOP_DATA_DIR
    opt.data_dir = WILLCOP_DATA_DIR;
#endif
    try {
        willcop::VerificationReport rep = willcop::run_verification(opt);
        willcop::print_report(rep, std::cout);
        return rep.overall() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "verification aborted: " << e.what() << "\n";
        return 1;
    }
}
