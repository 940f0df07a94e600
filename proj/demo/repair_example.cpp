// Applies the SC-layer to a few logit vectors and prints what happened.

#include <iostream>
#include <vector>

#include "scnet/scnet.hpp"

namespace {

void print(const std::vector<double>& y) {
    std::cout << '[';
    for (std::size_t i = 0; i < y.size(); ++i) std::cout << (i ? ", " : "") << y[i];
    std::cout << ']';
}

} // namespace

int main() {
    using namespace scnet;
    ConstraintSet phi;
    phi.n = 5;
    phi.m = 5;
    phi.constraints.push_back(
        {"phi2",
         {{{{1, 0, 0, 0, 0}, CompareOp::Ge, 55947.691},
           {{0, 0, 0, 1, 0}, CompareOp::Ge, 1145},
           {{0, 0, 0, 0, 1}, CompareOp::Le, 60}}},
         OrderingFormula::any_of({OrderingFormula::literal(1, 0), OrderingFormula::literal(2, 0),
                                  OrderingFormula::literal(3, 0), OrderingFormula::literal(4, 0)})});
    validate(phi);

    const std::vector<double> x{60000, 0, 0, 1200, 50};
    const std::vector<double> y{100, 900, 300, 140, 500};
    const auto out = self_repair(phi, x, y);
    std::cout << "input  ";
    print(y);
    std::cout << "\noutput ";
    if (out.bottom()) {
        std::cout << "abstain";
    } else {
        print(*out.result);
    }
    std::cout << "\nargmax " << argmax(y) << " -> " << (out.bottom() ? -1 : static_cast<long>(argmax(*out.result)))
              << '\n';

    ConstraintSet clash;
    clash.n = 1;
    clash.m = 2;
    clash.constraints.push_back({"low", {{{{1}, CompareOp::Le, 0.5}}}, OrderingFormula::literal(0, 1)});
    clash.constraints.push_back({"high", {{{{1}, CompareOp::Ge, 0.5}}}, OrderingFormula::literal(1, 0)});
    for (double x0 : {0.3, 0.5, 0.7}) {
        const std::vector<double> xi{x0};
        const auto r = self_repair(clash, xi, std::vector<double>{2, 1});
        std::cout << "x = " << x0 << ": ";
        if (r.bottom()) {
            std::cout << "abstain\n";
        } else {
            print(*r.result);
            std::cout << '\n';
        }
    }
}
