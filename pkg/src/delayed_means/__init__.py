"""Double delayed arithmetic means of Fourier series and their approximation rates."""
