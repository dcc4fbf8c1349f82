# Test directory for the certify package
