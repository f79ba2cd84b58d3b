#include "testlib.h"

int main(int argc, char* argv[]) {
    registerValidation(argc, argv);
    int n = inf.readInt(1, 200000, "N");
    inf.readEoln();
    for (int i = 0; i < n; i++) {
        long long v = inf.readLong(-1, 1000000000LL, "a_i");
        ensuref(v != 0, "a_%d is 0; values are -1 or in [1, 10^9]", i + 1);
        if (i + 1 < n) inf.readSpace();
    }
    inf.readEoln();
    inf.readEof();
    return 0;
}
