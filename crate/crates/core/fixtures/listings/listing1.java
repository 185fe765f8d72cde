package camelinaction;

import org.apache.camel.CamelContext;
import org.apache.camel.builder.RouteBuilder;
import org.apache.camel.impl.DefaultCamelContext;


public class FilePrinter {

   public static void main(String args[]) throws Exception {
      // create CamelContext
      CamelContext context = new DefaultCamelContext();

      // add our route to the CamelContext
      context.addRoutes(new RouteBuilder() {
      public void configure() {

      }
    });
  }
}
