#include "ipdp/app.hpp"

int main(int argc, char** argv) { return ipdp::RunCli(argc, argv); }
