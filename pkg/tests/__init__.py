# Test suite for the spectral gap workbench
