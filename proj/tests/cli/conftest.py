def pytest_addoption(parser):
    parser.addoption("--tk-bin", required=True, help="path to the tuckerkit executable")
    parser.addoption("--schemas", required=True, help="directory holding *.schema.json")
