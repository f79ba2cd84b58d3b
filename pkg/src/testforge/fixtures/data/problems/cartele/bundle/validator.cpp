#include "testlib.h"
#include <string>

int main(int argc, char* argv[]) {
    registerValidation(argc, argv);
    inf.readInt(1, 3, "C");
    inf.readSpace();
    int n = inf.readInt(1, 100000, "N");
    inf.readEoln();
    int prev = -1;
    for (int i = 0; i < n; i++) {
        std::string g = inf.readToken();
        ensuref(g == "b" || g == "f", "entry %d: group must be b or f", i + 1);
        inf.readSpace();
        std::string d = inf.readToken();
        ensuref(d == "i" || d == "e", "entry %d: direction must be i or e", i + 1);
        inf.readSpace();
        int h = inf.readInt(0, 23, "h");
        inf.readSpace();
        int m = inf.readInt(0, 59, "m");
        inf.readSpace();
        int s = inf.readInt(0, 59, "s");
        inf.readEoln();
        int t = h * 3600 + m * 60 + s;
        ensuref(t >= prev, "entry %d goes back in time", i + 1);
        prev = t;
    }
    inf.readEof();
    return 0;
}
