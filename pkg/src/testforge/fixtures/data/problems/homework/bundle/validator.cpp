#include "testlib.h"

int main(int argc, char* argv[]) {
    registerValidation(argc, argv);
    int n = inf.readInt(1, 200000, "N");
    inf.readEoln();
    for (int i = 0; i < n; i++) {
        inf.readLong(-1000000000000000000LL, 1000000000000000000LL, "a_i");
        if (i + 1 < n) inf.readSpace();
    }
    inf.readEoln();
    inf.readEof();
    return 0;
}
